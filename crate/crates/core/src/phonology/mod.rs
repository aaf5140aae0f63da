//! Orthographic morphophonology: suffix templates with metaphonemes,
//! their realization after a stem, and the inverse used by analysis.

mod realize;
mod segment;
mod strip;
mod template;

pub use realize::{assimilate_voice, harmonize, realize};
pub use segment::{
    consonant_class, fronted, is_back, is_high, is_round, is_voiceless, is_vowel, Buffer, ConsonantClass,
    MetaConsonant, MetaVowel, Segment,
};
pub use strip::{candidate_strips, Strip};
pub use template::{Allomorphs, MorphTemplate, PhonologyError, StemCondition, StemFlags};
