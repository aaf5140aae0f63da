//! Turkish orthographic segments and the underspecified metaphonemes used
//! in suffix templates.

use std::fmt;

pub const VOWELS: [char; 8] = ['a', 'e', 'ı', 'i', 'o', 'ö', 'u', 'ü'];
pub const VOICELESS: [char; 8] = ['p', 'ç', 't', 'k', 's', 'ş', 'h', 'f'];

pub fn is_vowel(c: char) -> bool {
    VOWELS.contains(&c)
}

pub fn is_back(v: char) -> bool {
    matches!(v, 'a' | 'ı' | 'o' | 'u')
}

pub fn is_round(v: char) -> bool {
    matches!(v, 'o' | 'ö' | 'u' | 'ü')
}

pub fn is_high(v: char) -> bool {
    matches!(v, 'ı' | 'i' | 'u' | 'ü')
}

pub fn is_voiceless(c: char) -> bool {
    VOICELESS.contains(&c)
}

/// Front counterpart of a vowel; used for stems that harmonize as front
/// despite a back final vowel (saat → saatler).
pub fn fronted(v: char) -> char {
    match v {
        'a' => 'e',
        'ı' => 'i',
        'o' => 'ö',
        'u' => 'ü',
        other => other,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConsonantClass {
    Stop,
    Affricate,
    Fricative,
    Nasal,
    Liquid,
    Glide,
}

pub fn consonant_class(c: char) -> ConsonantClass {
    match c {
        'p' | 'b' | 't' | 'd' | 'k' | 'g' => ConsonantClass::Stop,
        'ç' | 'c' => ConsonantClass::Affricate,
        'm' | 'n' => ConsonantClass::Nasal,
        'l' | 'r' => ConsonantClass::Liquid,
        'y' => ConsonantClass::Glide,
        _ => ConsonantClass::Fricative,
    }
}

/// Vowel metaphonemes: `A` low unrounded, backness open; `I` high, backness
/// and rounding open.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MetaVowel {
    A,
    I,
}

/// Consonant metaphonemes: `D` dental stop, `C` palatal affricate, voicing
/// open in both.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MetaConsonant {
    D,
    C,
}

/// Buffer consonants surface only after a vowel-final stem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Buffer {
    Y,
    S,
    N,
}

impl Buffer {
    pub fn letter(self) -> char {
        match self {
            Buffer::Y => 'y',
            Buffer::S => 's',
            Buffer::N => 'n',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Segment {
    Vowel(char),
    Consonant(char),
    MetaVowel(MetaVowel),
    MetaConsonant(MetaConsonant),
    Buffer(Buffer),
}

impl Segment {
    pub fn literal(c: char) -> Segment {
        if is_vowel(c) {
            Segment::Vowel(c)
        } else {
            Segment::Consonant(c)
        }
    }

    /// Starts with a vowel once realized.
    pub fn is_vocalic(self) -> bool {
        matches!(self, Segment::Vowel(_) | Segment::MetaVowel(_))
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Segment::Vowel(c) | Segment::Consonant(c) => write!(f, "{c}"),
            Segment::MetaVowel(MetaVowel::A) => f.write_str("A"),
            Segment::MetaVowel(MetaVowel::I) => f.write_str("I"),
            Segment::MetaConsonant(MetaConsonant::D) => f.write_str("D"),
            Segment::MetaConsonant(MetaConsonant::C) => f.write_str("C"),
            Segment::Buffer(b) => write!(f, "({})", b.letter()),
        }
    }
}
