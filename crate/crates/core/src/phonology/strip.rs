use super::realize::{devoiced_final, realize};
use super::template::{MorphTemplate, StemFlags};

/// One way of reading a surface form as stem plus suffix. `template` is
/// `None` for the empty strip.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Strip {
    pub stem: String,
    pub template: Option<MorphTemplate>,
}

const FLAG_COMBOS: [StemFlags; 4] = [
    StemFlags {
        final_stop_alternation: false,
        front_harmony: false,
        aorist_ir: false,
    },
    StemFlags {
        final_stop_alternation: true,
        front_harmony: false,
        aorist_ir: false,
    },
    StemFlags {
        final_stop_alternation: false,
        front_harmony: true,
        aorist_ir: false,
    },
    StemFlags {
        final_stop_alternation: true,
        front_harmony: true,
        aorist_ir: false,
    },
];

/// Every (stem, template) pair that realizes to `surface` under some flag
/// setting, plus the empty strip. Over-generates by design: callers verify
/// candidates against the lexicon.
pub fn candidate_strips<'a, I>(surface: &str, templates: I) -> Vec<Strip>
where
    I: IntoIterator<Item = &'a MorphTemplate>,
{
    let chars: Vec<char> = surface.chars().collect();
    let mut out = vec![Strip {
        stem: surface.to_string(),
        template: None,
    }];
    for tmpl in templates {
        let n = tmpl.segments().len();
        let lens = if tmpl.leading_buffer().is_some() {
            vec![n, n - 1]
        } else {
            vec![n]
        };
        for len in lens {
            if len == 0 || len >= chars.len() {
                continue;
            }
            let stem: String = chars[..chars.len() - len].iter().collect();
            let mut stems = vec![stem.clone()];
            stems.extend(devoiced_final(&stem));
            for s in stems {
                let ok = FLAG_COMBOS
                    .iter()
                    .any(|&f| realize(&s, tmpl, f).is_ok_and(|r| r == surface));
                if ok {
                    out.push(Strip {
                        stem: s,
                        template: Some(tmpl.clone()),
                    });
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn templates(list: &[&str]) -> Vec<MorphTemplate> {
        list.iter().map(|s| s.parse().unwrap()).collect()
    }

    fn has(strips: &[Strip], stem: &str, tmpl: &str) -> bool {
        strips
            .iter()
            .any(|s| s.stem == stem && s.template.as_ref().map(|t| t.to_string()).as_deref() == Some(tmpl))
    }

    #[test]
    fn locative_found() {
        let ts = templates(&["DA", "(y)I", "lAr"]);
        let s = candidate_strips("arabada", &ts);
        assert!(has(&s, "araba", "DA"));
        assert!(s.iter().any(|x| x.template.is_none() && x.stem == "arabada"));
    }

    #[test]
    fn alternation_reversed() {
        let ts = templates(&["(y)I"]);
        let s = candidate_strips("kitabı", &ts);
        assert!(has(&s, "kitap", "(y)I"));
        assert!(has(&s, "kitab", "(y)I"));
    }

    #[test]
    fn short_word_only_empty() {
        let ts = templates(&["DA", "(y)I", "lAr", "CI", "(n)In", "DAn", "mIş", "ki"]);
        let s = candidate_strips("yol", &ts);
        assert_eq!(s.len(), 1);
        assert!(s[0].template.is_none());
    }
}
