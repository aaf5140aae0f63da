use std::collections::{BTreeMap, BTreeSet};

use crate::feature::logical_lines;

/// Maps root semantic features to the senses a derivational suffix adds.
///
/// ```text
/// % feature   sense
/// period      habitual
/// place       doer-user
/// ```
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SenseTable {
    by_feature: BTreeMap<String, BTreeSet<String>>,
}

impl SenseTable {
    pub fn parse(source: &str) -> Result<SenseTable, (usize, String)> {
        let mut t = SenseTable::default();
        for (line, text) in logical_lines(source) {
            let words: Vec<&str> = text.split_whitespace().collect();
            match words.as_slice() {
                [feature, sense] => {
                    t.by_feature
                        .entry(feature.trim_start_matches('+').to_string())
                        .or_default()
                        .insert(sense.to_string());
                }
                _ => return Err((line, "expected `<feature> <sense>`".to_string())),
            }
        }
        Ok(t)
    }

    pub fn features(&self) -> impl Iterator<Item = &str> {
        self.by_feature.keys().map(String::as_str)
    }

    /// Distinct senses licensed by any of `features`, sorted.
    pub fn senses_for<'a, I>(&self, features: I) -> Vec<String>
    where
        I: IntoIterator<Item = &'a String>,
    {
        let mut out = BTreeSet::new();
        for f in features {
            if let Some(s) = self.by_feature.get(f) {
                out.extend(s.iter().cloned());
            }
        }
        out.into_iter().collect()
    }
}
