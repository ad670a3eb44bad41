//! Named constructors for the morphisms and words the rest of the crate
//! refers to. Every entry is reproducible deterministically.

use crate::error::Error;
use crate::stream::WordStream;
use crate::word::{Alphabet, Morphism, Word};
use crate::Result;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Kind {
    Morphism,
    Word,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub kind: Kind,
    pub alphabet: usize,
}

pub const MORPHISM_NAMES: [&str; 4] = ["g", "f", "h", "h'"];
pub const WORD_NAMES: [&str; 7] = [
    "g-fix",
    "hall",
    "ternary-sf",
    "hall-3",
    "blocks",
    "hall-u",
    "hall-v",
];

pub fn entries() -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    for name in MORPHISM_NAMES {
        let m = morphism(name).unwrap();
        out.push(CatalogEntry {
            name,
            kind: Kind::Morphism,
            alphabet: m.domain().size(),
        });
    }
    for name in WORD_NAMES {
        let w = word(name).unwrap();
        out.push(CatalogEntry {
            name,
            kind: Kind::Word,
            alphabet: w.alphabet().size(),
        });
    }
    out
}

/// Morphism by name: `g`, `f`, `h`, `h'` (alias `h-prime`).
pub fn morphism(name: &str) -> Result<Morphism> {
    let a3 = Alphabet::new(3)?;
    let a4 = Alphabet::new(4)?;
    match name {
        "g" => Morphism::from_digit_images(a4, &["0121", "032", "013", "0302"]),
        "f" => {
            let images = [
                "010201202101210212",
                "010201202102010212",
                "010201202120121012",
                "010201210201021012",
            ];
            let words = images
                .iter()
                .map(|s| Word::from_digits(s, a3))
                .collect::<Result<Vec<_>>>()?;
            Morphism::new(a4, a3, words)
        }
        "h" => Morphism::from_digit_images(a3, &["012", "02", "1"]),
        "h'" | "h-prime" => Morphism::from_digit_images(a3, &["210", "20", "1"]),
        _ => Err(Error::UnknownName(name.to_string())),
    }
}

/// Word stream by name.
///
/// * `g-fix` — fixed point of `g` from 0, square-free over four letters
/// * `hall` — the Hall word, fixed point of `h` from 0
/// * `ternary-sf` — image of `g-fix` under the square-free morphism `f`
/// * `hall-3` — the Hall word with a letter 3 prepended (over four letters)
/// * `blocks` — `012 00112 0001112 ...` (`0^k 1^k 2` for k = 1, 2, ...)
/// * `hall-u` — `h^2` applied to the fixed point of `h'^2` from 1
/// * `hall-v` — `h'` applied three times to the Hall word
pub fn word(name: &str) -> Result<WordStream> {
    match name {
        "g-fix" => WordStream::fixed_point(&morphism("g")?, 0),
        "hall" => WordStream::fixed_point(&morphism("h")?, 0),
        "ternary-sf" => WordStream::image(&morphism("f")?, &word("g-fix")?),
        "hall-3" => {
            let hall = word("hall")?;
            Ok(WordStream::from_rule(Alphabet::new(4)?, move |i| {
                if i == 0 {
                    Ok(3)
                } else {
                    hall.letter_at(i - 1)
                }
            }))
        }
        "blocks" => Ok(WordStream::from_rule(Alphabet::new(3)?, |pos| {
            Ok(blocks_letter(pos))
        })),
        "hall-u" => {
            let h = morphism("h")?;
            let hp = morphism("h'")?;
            let hp2 = Morphism::compose(&hp, &hp)?;
            let h2 = Morphism::compose(&h, &h)?;
            let core = WordStream::fixed_point(&hp2, 1)?;
            WordStream::image(&h2, &core)
        }
        "hall-v" => {
            let hp = morphism("h'")?;
            // three single applications, exercising the image-of-stream
            // generator; equivalence with the precomposed h'^3 is tested
            let mut s = word("hall")?;
            for _ in 0..3 {
                s = WordStream::image(&hp, &s)?;
            }
            Ok(s)
        }
        _ => Err(Error::UnknownName(name.to_string())),
    }
}

/// Letter of `0^1 1^1 2 0^2 1^2 2 0^3 1^3 2 ...` at `pos`, in O(sqrt(n))
/// by position arithmetic over the triangular segment lengths.
fn blocks_letter(pos: usize) -> u8 {
    // segment k (1-based) has length 2k + 1 and ends at offset k^2 + 2k
    let mut k = ((pos + 1) as f64).sqrt() as usize;
    while k * k + 2 * k <= pos {
        k += 1;
    }
    while k > 1 && (k - 1) * (k - 1) + 2 * (k - 1) > pos {
        k -= 1;
    }
    let start = k * k - 1; // (k-1)^2 + 2(k-1)
    let offset = pos - start;
    if offset < k {
        0
    } else if offset < 2 * k {
        1
    } else {
        2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_names() {
        assert!(matches!(morphism("nope"), Err(Error::UnknownName(_))));
        assert!(matches!(word("nope"), Err(Error::UnknownName(_))));
    }

    #[test]
    fn morphism_images_match_published_tables() {
        let g = morphism("g").unwrap();
        assert_eq!(g.image(0).unwrap().to_string(), "0121");
        assert_eq!(g.image(1).unwrap().to_string(), "032");
        assert_eq!(g.image(2).unwrap().to_string(), "013");
        assert_eq!(g.image(3).unwrap().to_string(), "0302");
        let f = morphism("f").unwrap();
        assert_eq!(f.image(3).unwrap().to_string(), "010201210201021012");
        let hp = morphism("h'").unwrap();
        assert_eq!(hp.image(1).unwrap().to_string(), "20");
        assert_eq!(morphism("h-prime").unwrap(), hp);
    }

    #[test]
    fn word_prefixes() {
        assert_eq!(
            word("hall").unwrap().prefix(12).unwrap().to_string(),
            "012021012102"
        );
        assert_eq!(
            word("blocks").unwrap().prefix(15).unwrap().to_string(),
            "012001120001112"
        );
        assert_eq!(word("hall-u").unwrap().prefix(2).unwrap().to_string(), "01");
        assert_eq!(
            word("hall-3").unwrap().prefix(7).unwrap().to_string(),
            "3012021"
        );
        assert_eq!(
            word("g-fix").unwrap().prefix(4).unwrap().to_string(),
            "0121"
        );
    }

    #[test]
    fn blocks_rule_matches_concatenation() {
        let mut expected = Vec::new();
        for k in 1usize..=40 {
            expected.extend(std::iter::repeat(0u8).take(k));
            expected.extend(std::iter::repeat(1u8).take(k));
            expected.push(2);
        }
        let s = word("blocks").unwrap();
        assert_eq!(s.prefix_letters(expected.len()).unwrap(), expected);
    }

    #[test]
    fn ternary_sf_is_f_of_g_fix() {
        let f = morphism("f").unwrap();
        let gfix = word("g-fix").unwrap();
        let t = word("ternary-sf").unwrap();
        // image alignment at multiples of 18 (every f-image has length 18)
        for n in [1usize, 7, 30] {
            let expect = f.apply(&gfix.prefix(n).unwrap()).unwrap();
            assert_eq!(t.prefix(18 * n).unwrap(), expect);
        }
        assert_eq!(
            t.prefix(18).unwrap().to_string(),
            "010201202101210212"
        );
    }

    #[test]
    fn composition_identities_on_streams() {
        // 2 (h o h')(w) = (h' o h)(w) and 0 h'^2(w) = h^2(w)
        let h = morphism("h").unwrap();
        let hp = morphism("h'").unwrap();
        let hall = word("hall").unwrap();
        let hhp = Morphism::compose(&h, &hp).unwrap();
        let hph = Morphism::compose(&hp, &h).unwrap();
        let lhs = WordStream::image(&hhp, &hall).unwrap().prefix(999).unwrap();
        let rhs = WordStream::image(&hph, &hall).unwrap().prefix(1000).unwrap();
        assert_eq!(rhs.letters()[0], 2);
        assert_eq!(lhs.letters(), &rhs.letters()[1..]);

        let h2 = Morphism::compose(&h, &h).unwrap();
        let hp2 = Morphism::compose(&hp, &hp).unwrap();
        let lhs = WordStream::image(&hp2, &hall).unwrap().prefix(999).unwrap();
        let rhs = WordStream::image(&h2, &hall).unwrap().prefix(1000).unwrap();
        assert_eq!(rhs.letters()[0], 0);
        assert_eq!(lhs.letters(), &rhs.letters()[1..]);
    }

    #[test]
    fn hall_3_is_letter_then_hall() {
        let hall = word("hall").unwrap();
        let hall3 = word("hall-3").unwrap();
        let p = hall3.prefix_letters(501).unwrap();
        assert_eq!(p[0], 3);
        assert_eq!(&p[1..], hall.prefix_letters(500).unwrap().as_slice());
    }

    #[test]
    fn hall_v_matches_precomposed_morphism() {
        let hp = morphism("h'").unwrap();
        let hp3 = Morphism::compose(&hp, &Morphism::compose(&hp, &hp).unwrap()).unwrap();
        let hall = word("hall").unwrap();
        let direct = WordStream::image(&hp3, &hall).unwrap();
        let catalog = word("hall-v").unwrap();
        assert_eq!(direct.prefix(2000).unwrap(), catalog.prefix(2000).unwrap());
    }

    #[test]
    fn catalog_listing() {
        let es = entries();
        assert_eq!(es.len(), 11);
        assert!(es.iter().any(|e| e.name == "hall" && e.kind == Kind::Word && e.alphabet == 3));
        assert!(es
            .iter()
            .any(|e| e.name == "g" && e.kind == Kind::Morphism && e.alphabet == 4));
        // names unique
        let mut names: Vec<_> = es.iter().map(|e| e.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), es.len());
    }
}
