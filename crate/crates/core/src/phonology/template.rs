use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::segment::{is_vowel, Buffer, MetaConsonant, MetaVowel, Segment};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PhonologyError {
    #[error("`{0}` is not a vowel")]
    NotAVowel(char),
    #[error("stem `{0}` has no vowel")]
    NoVowel(String),
    #[error("empty stem")]
    EmptyStem,
    #[error("bad template `{0}`: {1}")]
    BadTemplate(String, &'static str),
    #[error("unknown stem condition `{0}`")]
    UnknownCondition(String),
    #[error("unknown stem flag `{0}`")]
    UnknownFlag(String),
}

/// A suffix shape such as `DA`, `(y)I` or `lAr`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MorphTemplate {
    segments: Vec<Segment>,
}

impl MorphTemplate {
    pub fn new(segments: Vec<Segment>) -> Result<MorphTemplate, PhonologyError> {
        let shown: String = segments.iter().map(|s| s.to_string()).collect();
        if segments.is_empty() {
            return Err(PhonologyError::BadTemplate(shown, "empty template"));
        }
        if segments
            .iter()
            .skip(1)
            .any(|s| matches!(s, Segment::Buffer(_)))
        {
            return Err(PhonologyError::BadTemplate(
                shown,
                "a buffer may only open the template",
            ));
        }
        Ok(MorphTemplate { segments })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn leading_buffer(&self) -> Option<Buffer> {
        match self.segments.first() {
            Some(Segment::Buffer(b)) => Some(*b),
            _ => None,
        }
    }
}

impl FromStr for MorphTemplate {
    type Err = PhonologyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut segs = Vec::new();
        let mut chars = s.chars().peekable();
        while let Some(c) = chars.next() {
            let seg = match c {
                '(' => {
                    let b = match chars.next() {
                        Some('y') => Buffer::Y,
                        Some('s') => Buffer::S,
                        Some('n') => Buffer::N,
                        _ => return Err(PhonologyError::BadTemplate(s.into(), "unknown buffer")),
                    };
                    if chars.next() != Some(')') {
                        return Err(PhonologyError::BadTemplate(s.into(), "unclosed buffer"));
                    }
                    Segment::Buffer(b)
                }
                'A' => Segment::MetaVowel(MetaVowel::A),
                'I' => Segment::MetaVowel(MetaVowel::I),
                'D' => Segment::MetaConsonant(MetaConsonant::D),
                'C' => Segment::MetaConsonant(MetaConsonant::C),
                c if c.is_lowercase() => Segment::literal(c),
                _ => return Err(PhonologyError::BadTemplate(s.into(), "unexpected character")),
            };
            segs.push(seg);
        }
        MorphTemplate::new(segs)
    }
}

impl fmt::Display for MorphTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.segments {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Lexical properties of a stem that the regular rules cannot predict.
/// They describe the bare root and lapse once any suffix is attached.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StemFlags {
    /// Final p/ç/t/k voices before a vowel (kitap → kitabı).
    pub final_stop_alternation: bool,
    /// Harmonizes as front despite a back final vowel (saat → saatler).
    pub front_harmony: bool,
    /// Takes the high-vowel aorist (bil → bilir, not *biler).
    pub aorist_ir: bool,
}

impl StemFlags {
    pub fn parse_list(s: &str) -> Result<StemFlags, PhonologyError> {
        let mut f = StemFlags::default();
        for name in s.split(',').map(str::trim).filter(|n| !n.is_empty()) {
            match name {
                "alt" => f.final_stop_alternation = true,
                "front" => f.front_harmony = true,
                "aor-ir" => f.aorist_ir = true,
                other => return Err(PhonologyError::UnknownFlag(other.to_string())),
            }
        }
        Ok(f)
    }

    pub fn names(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if self.final_stop_alternation {
            v.push("alt");
        }
        if self.front_harmony {
            v.push("front");
        }
        if self.aorist_ir {
            v.push("aor-ir");
        }
        v
    }

    pub fn any(&self) -> bool {
        self.final_stop_alternation || self.front_harmony || self.aorist_ir
    }
}

/// Shape conditions that select between allomorphs of one suffix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StemCondition {
    VowelFinal,
    ConsonantFinal,
    LFinal,
    /// More than one syllable and ending in l or r.
    PolysyllabicLiquid,
    Polysyllabic,
    Monosyllabic,
    AoristIr,
}

impl FromStr for StemCondition {
    type Err = PhonologyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "vowel" => StemCondition::VowelFinal,
            "cons" => StemCondition::ConsonantFinal,
            "l-final" => StemCondition::LFinal,
            "poly-lr" => StemCondition::PolysyllabicLiquid,
            "poly" => StemCondition::Polysyllabic,
            "mono" => StemCondition::Monosyllabic,
            "aor-ir" => StemCondition::AoristIr,
            other => return Err(PhonologyError::UnknownCondition(other.to_string())),
        })
    }
}

impl StemCondition {
    pub fn holds(self, stem: &str, flags: StemFlags) -> bool {
        let last = stem.chars().last();
        let syllables = stem.chars().filter(|&c| is_vowel(c)).count();
        match self {
            StemCondition::VowelFinal => last.is_some_and(is_vowel),
            StemCondition::ConsonantFinal => last.is_some_and(|c| !is_vowel(c)),
            StemCondition::LFinal => last == Some('l'),
            StemCondition::PolysyllabicLiquid => syllables > 1 && matches!(last, Some('l' | 'r')),
            StemCondition::Polysyllabic => syllables > 1,
            StemCondition::Monosyllabic => syllables == 1,
            StemCondition::AoristIr => flags.aorist_ir,
        }
    }
}

/// Allomorphs tried in order; the first whose condition holds is used.
/// Written `t/vowel|t/poly-lr|DIr`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Allomorphs {
    variants: Vec<(Option<StemCondition>, MorphTemplate)>,
}

impl Allomorphs {
    pub fn single(t: MorphTemplate) -> Allomorphs {
        Allomorphs {
            variants: vec![(None, t)],
        }
    }

    pub fn select(&self, stem: &str, flags: StemFlags) -> Option<&MorphTemplate> {
        self.variants
            .iter()
            .find(|(cond, _)| cond.is_none_or(|c| c.holds(stem, flags)))
            .map(|(_, t)| t)
    }

    pub fn templates(&self) -> impl Iterator<Item = &MorphTemplate> {
        self.variants.iter().map(|(_, t)| t)
    }
}

impl FromStr for Allomorphs {
    type Err = PhonologyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let variants = s
            .split('|')
            .map(|v| match v.split_once('/') {
                Some((t, c)) => Ok((Some(c.parse()?), t.parse()?)),
                None => Ok((None, v.parse()?)),
            })
            .collect::<Result<Vec<_>, PhonologyError>>()?;
        Ok(Allomorphs { variants })
    }
}

impl fmt::Display for Allomorphs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (_, t)) in self.variants.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}
