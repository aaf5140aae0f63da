use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

/// Affix positions, in the order they may be filled. Nominal and verbal
/// slots share one order; which ones a word can use follows from the input
/// types of the rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Deriv,
    Subst,
    Plu,
    Poss,
    Case,
    Rel,
    Caus,
    Pass,
    Val,
    Neg,
    Mood,
    Asp,
    Tense,
    Person,
    Num,
    Adv,
}

impl Slot {
    pub const ALL: [Slot; 16] = [
        Slot::Deriv,
        Slot::Subst,
        Slot::Plu,
        Slot::Poss,
        Slot::Case,
        Slot::Rel,
        Slot::Caus,
        Slot::Pass,
        Slot::Val,
        Slot::Neg,
        Slot::Mood,
        Slot::Asp,
        Slot::Tense,
        Slot::Person,
        Slot::Num,
        Slot::Adv,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Slot::Deriv => "DERIV",
            Slot::Subst => "SUBST",
            Slot::Plu => "PLU",
            Slot::Poss => "POSS",
            Slot::Case => "CASE",
            Slot::Rel => "REL",
            Slot::Caus => "CAUS",
            Slot::Pass => "PASS",
            Slot::Val => "VAL",
            Slot::Neg => "NEG",
            Slot::Mood => "MOOD",
            Slot::Asp => "ASP",
            Slot::Tense => "TENSE",
            Slot::Person => "PERSON",
            Slot::Num => "NUM",
            Slot::Adv => "ADV",
        }
    }

    /// Only the causative may fill its slot more than once.
    pub fn repeatable(self) -> bool {
        self == Slot::Caus
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Slot {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Slot::ALL
            .iter()
            .copied()
            .find(|slot| slot.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown slot `{s}`"))
    }
}

impl Serialize for Slot {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// How far along the slot order an entry is.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlotState {
    pub last: Option<Slot>,
    /// Times the last slot has been filled in a row.
    pub repeats: u8,
}

impl SlotState {
    /// Whether a rule at `slot` may apply next.
    pub fn admits(&self, slot: Slot, max_repeats: u8) -> bool {
        match self.last {
            None => true,
            Some(l) if l < slot => true,
            Some(l) => l == slot && slot.repeatable() && self.repeats < max_repeats,
        }
    }

    pub fn after(&self, slot: Slot) -> SlotState {
        if self.last == Some(slot) {
            SlotState {
                last: Some(slot),
                repeats: self.repeats + 1,
            }
        } else {
            SlotState {
                last: Some(slot),
                repeats: 1,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_strict_except_causative() {
        let s = SlotState::default().after(Slot::Case);
        assert!(!s.admits(Slot::Plu, 2));
        assert!(!s.admits(Slot::Case, 2));
        assert!(s.admits(Slot::Rel, 2));
        let c = SlotState::default().after(Slot::Caus);
        assert!(c.admits(Slot::Caus, 2));
        assert!(!c.after(Slot::Caus).admits(Slot::Caus, 2));
        assert!(!c.admits(Slot::Caus, 1));
    }

    #[test]
    fn names_round_trip() {
        for s in Slot::ALL {
            assert_eq!(s.name().parse::<Slot>().unwrap(), s);
        }
        assert!("tense".parse::<Slot>().is_ok());
        assert!("XYZ".parse::<Slot>().is_err());
    }
}
