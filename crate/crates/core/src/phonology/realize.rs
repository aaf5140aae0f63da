use super::segment::{fronted, is_back, is_round, is_vowel, is_voiceless, MetaConsonant, MetaVowel, Segment};
use super::template::{MorphTemplate, PhonologyError, StemFlags};

/// Surface vowel for `A` or `I` after the vowel `context`.
pub fn harmonize(v: MetaVowel, context: char) -> Result<char, PhonologyError> {
    if !is_vowel(context) {
        return Err(PhonologyError::NotAVowel(context));
    }
    let back = is_back(context);
    Ok(match v {
        MetaVowel::A => {
            if back {
                'a'
            } else {
                'e'
            }
        }
        MetaVowel::I => match (back, is_round(context)) {
            (true, false) => 'ı',
            (false, false) => 'i',
            (true, true) => 'u',
            (false, true) => 'ü',
        },
    })
}

/// Surface consonant for `D` or `C` after the segment `context`.
pub fn assimilate_voice(c: MetaConsonant, context: char) -> char {
    let voiceless = is_voiceless(context);
    match (c, voiceless) {
        (MetaConsonant::D, true) => 't',
        (MetaConsonant::D, false) => 'd',
        (MetaConsonant::C, true) => 'ç',
        (MetaConsonant::C, false) => 'c',
    }
}

/// Voiced counterpart of a stem-final stop, if it alternates.
pub(crate) fn voiced_final(stem: &str) -> Option<String> {
    let mut chars: Vec<char> = stem.chars().collect();
    let last = *chars.last()?;
    let before = chars.len().checked_sub(2).map(|i| chars[i]);
    let v = match last {
        'p' => 'b',
        'ç' => 'c',
        't' => 'd',
        'k' if before == Some('n') => 'g',
        'k' => 'ğ',
        _ => return None,
    };
    *chars.last_mut().expect("non-empty") = v;
    Some(chars.into_iter().collect())
}

/// Voiceless counterparts a stem ending in a voiced stop could come from.
pub(crate) fn devoiced_final(stem: &str) -> Option<String> {
    let mut chars: Vec<char> = stem.chars().collect();
    let last = *chars.last()?;
    let before = chars.len().checked_sub(2).map(|i| chars[i]);
    let v = match last {
        'b' => 'p',
        'c' => 'ç',
        'd' => 't',
        'ğ' => 'k',
        'g' if before == Some('n') => 'k',
        _ => return None,
    };
    *chars.last_mut().expect("non-empty") = v;
    Some(chars.into_iter().collect())
}

/// Attach `template` to `stem`.
///
/// The buffer is kept after a vowel-final stem and dropped otherwise. If
/// the stem alternates and what follows starts with a vowel, its final stop
/// is voiced. Metaphonemes are then resolved left to right, each one
/// looking at the material already emitted.
pub fn realize(stem: &str, template: &MorphTemplate, flags: StemFlags) -> Result<String, PhonologyError> {
    let last = stem.chars().last().ok_or(PhonologyError::EmptyStem)?;
    if !stem.chars().any(is_vowel) {
        return Err(PhonologyError::NoVowel(stem.to_string()));
    }
    let segs = template.segments();
    let segs: &[Segment] = match segs.first() {
        Some(Segment::Buffer(_)) if !is_vowel(last) => &segs[1..],
        _ => segs,
    };

    let mut out = String::with_capacity(stem.len() + 2 * segs.len());
    match segs.first() {
        Some(first) if flags.final_stop_alternation && first.is_vocalic() => {
            out.push_str(&voiced_final(stem).unwrap_or_else(|| stem.to_string()));
        }
        _ => out.push_str(stem),
    }

    let mut vowel = stem.chars().rev().find(|&c| is_vowel(c)).expect("checked above");
    if flags.front_harmony {
        vowel = fronted(vowel);
    }
    let mut prev = out.chars().last().expect("non-empty");
    for s in segs {
        let c = match *s {
            Segment::Vowel(c) | Segment::Consonant(c) => c,
            Segment::Buffer(b) => b.letter(),
            Segment::MetaVowel(m) => harmonize(m, vowel)?,
            Segment::MetaConsonant(m) => assimilate_voice(m, prev),
        };
        if is_vowel(c) {
            vowel = c;
        }
        prev = c;
        out.push(c);
    }
    Ok(out)
}
