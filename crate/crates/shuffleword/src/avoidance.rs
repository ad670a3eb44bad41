//! Square, pattern and fractional-repetition scans over finite words.
//!
//! Exponents are exact rationals; all detectors are deterministic with
//! leftmost-then-shortest tie-breaking so reports are stable across runs.

use std::cmp::Ordering;
use std::fmt;

use crate::error::Error;
use crate::word::Word;
use crate::Result;

/// An exact non-negative rational in lowest terms.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Rational {
    num: u64,
    den: u64,
}

impl Rational {
    pub fn new(num: u64, den: u64) -> Rational {
        assert!(den != 0, "zero denominator");
        let g = gcd(num.max(1), den);
        Rational {
            num: num / g,
            den: den / g,
        }
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Outcome of a square scan.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SquareReport {
    Clean,
    Violation { position: usize, root: Word },
}

impl SquareReport {
    pub fn is_clean(&self) -> bool {
        matches!(self, SquareReport::Clean)
    }
}

/// Outcome of a `3u1u3` scan; `middle` is the word `u` (possibly empty).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PatternReport {
    Clean,
    Violation { position: usize, middle: Word },
}

impl PatternReport {
    pub fn is_clean(&self) -> bool {
        matches!(self, PatternReport::Clean)
    }
}

/// Maximal fractional repetition found in a word.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ExponentReport {
    pub exponent: Rational,
    pub position: usize,
    pub period: usize,
    pub length: usize,
}

/// Leftmost square `uu` (then shortest root) in `w`, or clean.
///
/// For each candidate period `L` the match lengths
/// `m(p) = lcp(w[p..], w[p+L..])` satisfy `m(p) = m(p+1)+1` when the
/// letters at distance `L` agree, so one right-to-left sweep per period
/// finds every square of that period in O(n) time.
pub fn find_square(w: &Word) -> SquareReport {
    let s = w.letters();
    let n = s.len();
    let mut best: Option<(usize, usize)> = None; // (position, root length)
    for period in 1..=n / 2 {
        let mut m = 0usize;
        let mut leftmost: Option<usize> = None;
        for p in (0..n - period).rev() {
            m = if s[p] == s[p + period] { m + 1 } else { 0 };
            if m >= period {
                leftmost = Some(p);
            }
        }
        if let Some(p) = leftmost {
            if best.map_or(true, |b| (p, period) < b) {
                best = Some((p, period));
            }
        }
    }
    match best {
        None => SquareReport::Clean,
        Some((position, len)) => SquareReport::Violation {
            position,
            root: w.factor(position, position + len),
        },
    }
}

/// Leftmost factor of shape `3 u 1 u 3` (u possibly empty), or clean.
///
/// Enumerates positions of the letter 3 and tests each ordered pair with
/// the midpoint-letter constraint.
pub fn find_pattern_3u1u3(w: &Word) -> Result<PatternReport> {
    let s = w.letters();
    if let Some(&l) = s.iter().find(|&&l| l > 3) {
        return Err(Error::LetterOutOfRange {
            letter: l,
            alphabet: 4,
        });
    }
    let threes: Vec<usize> = (0..s.len()).filter(|&i| s[i] == 3).collect();
    for (ai, &a) in threes.iter().enumerate() {
        for &b in &threes[ai + 1..] {
            if (b - a) % 2 != 0 {
                continue;
            }
            let t = (b - a - 2) / 2;
            if s[a + t + 1] == 1 && s[a + 1..a + 1 + t] == s[a + t + 2..a + t + 2 + t] {
                return Ok(PatternReport::Violation {
                    position: a,
                    middle: w.factor(a + 1, a + 1 + t),
                });
            }
        }
    }
    Ok(PatternReport::Clean)
}

/// Maximum of `|v| / p` over all factors `v` of `w` and all periods `p`
/// of `v`; equivalently the critical exponent of `w` over its factors,
/// reported with a witness of maximal exponent and smallest period.
pub fn max_exponent(w: &Word) -> Result<ExponentReport> {
    let s = w.letters();
    let n = s.len();
    if n == 0 {
        return Err(Error::InvalidInput("max_exponent of the empty word".into()));
    }
    // every single letter is a factor of exponent 1/1
    let mut best = ExponentReport {
        exponent: Rational::new(1, 1),
        position: 0,
        period: 1,
        length: 1,
    };
    for period in 1..n {
        let mut m = 0usize;
        for p in (0..n - period).rev() {
            m = if s[p] == s[p + period] { m + 1 } else { 0 };
            let length = period + m;
            let e = Rational::new(length as u64, period as u64);
            let candidate = (e, std::cmp::Reverse((p, period)));
            let incumbent = (
                best.exponent,
                std::cmp::Reverse((best.position, best.period)),
            );
            if candidate > incumbent {
                best = ExponentReport {
                    exponent: e,
                    position: p,
                    period,
                    length,
                };
            }
        }
    }
    Ok(best)
}

/// The repetition threshold RT(k): 7/4 for k=3, 7/5 for k=4, k/(k-1)
/// otherwise.
pub fn repetition_threshold(k: usize) -> Result<Rational> {
    match k {
        0 | 1 => Err(Error::InvalidInput(format!(
            "repetition threshold needs an alphabet of size >= 2, got {k}"
        ))),
        3 => Ok(Rational::new(7, 4)),
        4 => Ok(Rational::new(7, 5)),
        _ => Ok(Rational::new(k as u64, (k - 1) as u64)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::word::Alphabet;
    use proptest::prelude::*;

    fn w3(s: &str) -> Word {
        Word::from_digits(s, Alphabet::new(3).unwrap()).unwrap()
    }

    fn w4(s: &str) -> Word {
        Word::from_digits(s, Alphabet::new(4).unwrap()).unwrap()
    }

    /// O(n^3) reference detector used to cross-check the sweeping one.
    fn square_oracle(s: &[u8]) -> Option<(usize, usize)> {
        let n = s.len();
        let mut best = None;
        for p in 0..n {
            for l in 1..=(n - p) / 2 {
                if s[p..p + l] == s[p + l..p + 2 * l] {
                    best = Some((p, l));
                    break;
                }
            }
            if best.is_some() {
                break;
            }
        }
        best
    }

    fn pattern_oracle(s: &[u8]) -> Option<(usize, usize)> {
        let n = s.len();
        for a in 0..n {
            for t in 0..n {
                let b = a + 2 * t + 2;
                if b >= n {
                    break;
                }
                if s[a] == 3
                    && s[b] == 3
                    && s[a + t + 1] == 1
                    && s[a + 1..a + 1 + t] == s[a + t + 2..b]
                {
                    return Some((a, t));
                }
            }
        }
        None
    }

    #[test]
    fn square_examples() {
        assert_eq!(
            find_square(&w3("012012")),
            SquareReport::Violation {
                position: 0,
                root: w3("012")
            }
        );
        assert!(find_square(&w3("0102010")).is_clean());
        let gfix = catalog::word("g-fix").unwrap();
        assert!(find_square(&gfix.prefix(1000).unwrap()).is_clean());
    }

    #[test]
    fn square_tie_breaking() {
        // "00" at 0 beats the longer square root later on
        let r = find_square(&w3("0011011"));
        assert_eq!(
            r,
            SquareReport::Violation {
                position: 0,
                root: w3("0")
            }
        );
    }

    #[test]
    fn pattern_examples() {
        assert_eq!(
            find_pattern_3u1u3(&w4("30103")).unwrap(),
            PatternReport::Violation {
                position: 0,
                middle: w4("0")
            }
        );
        assert_eq!(
            find_pattern_3u1u3(&w4("313")).unwrap(),
            PatternReport::Violation {
                position: 0,
                middle: Word::empty(Alphabet::new(4).unwrap())
            }
        );
        let gfix = catalog::word("g-fix").unwrap();
        assert!(find_pattern_3u1u3(&gfix.prefix(1000).unwrap())
            .unwrap()
            .is_clean());
    }

    #[test]
    fn pattern_oracle_exhaustive_small() {
        // all Sigma_4 words of length <= 10, sampled densely by code stride
        for len in 0..=10usize {
            let total = 4usize.pow(len as u32);
            let stride = if len >= 9 { 11 } else { 1 };
            let mut code = 0;
            while code < total {
                let letters: Vec<u8> = (0..len).map(|i| ((code >> (2 * i)) & 3) as u8).collect();
                let w = Word::new(Alphabet::new(4).unwrap(), letters.clone()).unwrap();
                let got = match find_pattern_3u1u3(&w).unwrap() {
                    PatternReport::Clean => None,
                    PatternReport::Violation { position, middle } => {
                        Some((position, middle.len()))
                    }
                };
                assert_eq!(got, pattern_oracle(&letters), "word {w}");
                code += stride;
            }
        }
    }

    #[test]
    fn exponent_examples() {
        let r = max_exponent(&w3("01010")).unwrap();
        assert_eq!(r.exponent, Rational::new(5, 2));
        assert_eq!(r.period, 2);
        let r = max_exponent(&w3("0")).unwrap();
        assert_eq!(r.exponent, Rational::new(1, 1));
        let r = max_exponent(&w3("0011")).unwrap();
        assert_eq!(r.exponent, Rational::new(2, 1));
        assert_eq!(r.period, 1);
        assert_eq!(r.position, 0);
    }

    #[test]
    fn threshold_table() {
        assert!(repetition_threshold(0).is_err());
        assert!(repetition_threshold(1).is_err());
        assert_eq!(repetition_threshold(2).unwrap(), Rational::new(2, 1));
        assert_eq!(repetition_threshold(3).unwrap(), Rational::new(7, 4));
        assert_eq!(repetition_threshold(4).unwrap(), Rational::new(7, 5));
        assert_eq!(repetition_threshold(5).unwrap(), Rational::new(5, 4));
        assert_eq!(repetition_threshold(11).unwrap(), Rational::new(11, 10));
    }

    #[test]
    fn rational_ordering() {
        assert!(Rational::new(7, 4) > Rational::new(7, 5));
        assert!(Rational::new(2, 1) > Rational::new(7, 4));
        assert_eq!(Rational::new(14, 8), Rational::new(7, 4));
        assert_eq!(Rational::new(7, 4).to_string(), "7/4");
    }

    proptest! {
        #[test]
        fn square_matches_oracle_random_sigma4(letters in proptest::collection::vec(0u8..4, 0..64)) {
            let w = Word::new(Alphabet::new(4).unwrap(), letters.clone()).unwrap();
            let got = match find_square(&w) {
                SquareReport::Clean => None,
                SquareReport::Violation { position, root } => Some((position, root.len())),
            };
            prop_assert_eq!(got, square_oracle(&letters));
        }

        #[test]
        fn square_clean_implies_exponent_below_two(letters in proptest::collection::vec(0u8..3, 1..40)) {
            let w = Word::new(Alphabet::new(3).unwrap(), letters).unwrap();
            if find_square(&w).is_clean() {
                let e = max_exponent(&w).unwrap();
                prop_assert!(e.exponent < Rational::new(2, 1));
            }
        }

        #[test]
        fn doubled_word_has_exponent_at_least_two(letters in proptest::collection::vec(0u8..3, 1..24)) {
            let mut doubled = letters.clone();
            doubled.extend_from_slice(&letters);
            let w = Word::new(Alphabet::new(3).unwrap(), doubled).unwrap();
            let e = max_exponent(&w).unwrap();
            prop_assert!(e.exponent >= Rational::new(2, 1));
            prop_assert!(!find_square(&w).is_clean());
        }

        #[test]
        fn violation_position_monotone_under_extension(
            letters in proptest::collection::vec(0u8..3, 2..40),
            extra in 0u8..3,
        ) {
            let a3 = Alphabet::new(3).unwrap();
            let w = Word::new(a3, letters.clone()).unwrap();
            if let SquareReport::Violation { position, .. } = find_square(&w) {
                let mut longer = letters;
                longer.push(extra);
                let w2 = Word::new(a3, longer).unwrap();
                match find_square(&w2) {
                    SquareReport::Violation { position: p2, .. } => prop_assert!(p2 <= position),
                    SquareReport::Clean => prop_assert!(false, "extension lost the square"),
                }
            }
        }
    }

    #[test]
    fn square_oracle_exhaustive_sigma3_len9() {
        // lengths beyond 9 are covered by the acceptance suite
        for len in 0..=9usize {
            for code in 0..3usize.pow(len as u32) {
                let mut c = code;
                let letters: Vec<u8> = (0..len)
                    .map(|_| {
                        let l = (c % 3) as u8;
                        c /= 3;
                        l
                    })
                    .collect();
                let w = Word::new(Alphabet::new(3).unwrap(), letters.clone()).unwrap();
                let got = match find_square(&w) {
                    SquareReport::Clean => None,
                    SquareReport::Violation { position, root } => Some((position, root.len())),
                };
                assert_eq!(got, square_oracle(&letters), "word {w}");
            }
        }
    }
}
