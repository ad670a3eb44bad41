//! Alphabets, finite words and morphisms.
//!
//! Letters are small non-negative integers stored as bytes; an alphabet of
//! size `k` uses exactly the letters `0..k`. Words carry their alphabet so
//! that morphism application can reject foreign letters early.

use std::fmt;

use crate::error::Error;
use crate::Result;

/// Alphabet `{0, 1, ..., k-1}` for `2 <= k <= 255`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Alphabet {
    size: u8,
}

impl Alphabet {
    pub fn new(size: usize) -> Result<Self> {
        if !(2..=255).contains(&size) {
            return Err(Error::InvalidInput(format!(
                "alphabet size must be in 2..=255, got {size}"
            )));
        }
        Ok(Alphabet { size: size as u8 })
    }

    pub fn size(&self) -> usize {
        self.size as usize
    }

    pub fn contains(&self, letter: u8) -> bool {
        (letter as usize) < self.size()
    }

    pub fn check(&self, letter: u8) -> Result<()> {
        if self.contains(letter) {
            Ok(())
        } else {
            Err(Error::LetterOutOfRange {
                letter,
                alphabet: self.size(),
            })
        }
    }
}

/// A finite word over a fixed alphabet. The empty word is allowed.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Word {
    alphabet: Alphabet,
    letters: Vec<u8>,
}

impl Word {
    pub fn new(alphabet: Alphabet, letters: Vec<u8>) -> Result<Self> {
        for &l in &letters {
            alphabet.check(l)?;
        }
        Ok(Word { alphabet, letters })
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        Word {
            alphabet,
            letters: Vec::new(),
        }
    }

    /// Parse a word from decimal digit characters, e.g. `"0121"`.
    pub fn from_digits(digits: &str, alphabet: Alphabet) -> Result<Self> {
        let mut letters = Vec::with_capacity(digits.len());
        for c in digits.chars() {
            let d = c
                .to_digit(10)
                .ok_or_else(|| Error::InvalidInput(format!("not a digit: {c:?}")))?;
            letters.push(d as u8);
        }
        Word::new(alphabet, letters)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn factor(&self, start: usize, end: usize) -> Word {
        Word {
            alphabet: self.alphabet,
            letters: self.letters[start..end].to_vec(),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word {
            alphabet: self.alphabet,
            letters,
        }
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.letters.starts_with(&self.letters)
    }

    pub fn is_suffix_of(&self, other: &Word) -> bool {
        other.letters.ends_with(&self.letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// A morphism determined by one image word per domain letter.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Morphism {
    domain: Alphabet,
    codomain: Alphabet,
    images: Vec<Word>,
}

impl Morphism {
    pub fn new(domain: Alphabet, codomain: Alphabet, images: Vec<Word>) -> Result<Self> {
        if images.len() != domain.size() {
            return Err(Error::InvalidInput(format!(
                "expected {} images, got {}",
                domain.size(),
                images.len()
            )));
        }
        for img in &images {
            for &l in img.letters() {
                codomain.check(l)?;
            }
        }
        Ok(Morphism {
            domain,
            codomain,
            images,
        })
    }

    /// Endomorphism over one alphabet with images given as digit strings.
    pub fn from_digit_images(alphabet: Alphabet, images: &[&str]) -> Result<Self> {
        let words = images
            .iter()
            .map(|s| Word::from_digits(s, alphabet))
            .collect::<Result<Vec<_>>>()?;
        Morphism::new(alphabet, alphabet, words)
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        let images = (0..alphabet.size())
            .map(|a| Word {
                alphabet,
                letters: vec![a as u8],
            })
            .collect();
        Morphism {
            domain: alphabet,
            codomain: alphabet,
            images,
        }
    }

    pub fn domain(&self) -> Alphabet {
        self.domain
    }

    pub fn codomain(&self) -> Alphabet {
        self.codomain
    }

    pub fn image(&self, letter: u8) -> Result<&Word> {
        self.domain.check(letter)?;
        Ok(&self.images[letter as usize])
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        let mut letters = Vec::new();
        for &l in w.letters() {
            letters.extend_from_slice(self.image(l)?.letters());
        }
        Ok(Word {
            alphabet: self.codomain,
            letters,
        })
    }

    /// Apply the morphism `n` times; requires domain = codomain.
    pub fn apply_power(&self, n: usize, w: &Word) -> Result<Word> {
        if self.domain != self.codomain {
            return Err(Error::AlphabetMismatch(
                "power of a morphism requires domain = codomain".into(),
            ));
        }
        let mut cur = w.clone();
        for _ in 0..n {
            cur = self.apply(&cur)?;
        }
        Ok(cur)
    }

    /// `compose(outer, inner)(a) = outer(inner(a))`.
    pub fn compose(outer: &Morphism, inner: &Morphism) -> Result<Morphism> {
        if inner.codomain != outer.domain {
            return Err(Error::AlphabetMismatch(format!(
                "inner codomain size {} != outer domain size {}",
                inner.codomain.size(),
                outer.domain.size()
            )));
        }
        let images = inner
            .images
            .iter()
            .map(|img| outer.apply(img))
            .collect::<Result<Vec<_>>>()?;
        Morphism::new(inner.domain, outer.codomain, images)
    }

    /// True when `image(a)` starts with `a` and has at least two letters,
    /// so that iterating the morphism from `a` converges to a fixed point.
    pub fn prolongable_at(&self, letter: u8) -> bool {
        match self.image(letter) {
            Ok(img) => img.len() >= 2 && img.letters()[0] == letter,
            Err(_) => false,
        }
    }

    /// Checks that the image set is simultaneously a prefix code and a
    /// suffix code. Duplicate or empty images disqualify the set.
    pub fn image_set_is_bifix(&self) -> Result<()> {
        let imgs = &self.images;
        for (a, u) in imgs.iter().enumerate() {
            if u.is_empty() {
                return Err(Error::NotBifixCode(format!("image of {a} is empty")));
            }
            for (b, v) in imgs.iter().enumerate() {
                if a == b {
                    continue;
                }
                if u == v {
                    return Err(Error::NotBifixCode(format!(
                        "images of {a} and {b} coincide"
                    )));
                }
                if u.is_prefix_of(v) {
                    return Err(Error::NotBifixCode(format!(
                        "image of {a} is a prefix of image of {b}"
                    )));
                }
                if u.is_suffix_of(v) {
                    return Err(Error::NotBifixCode(format!(
                        "image of {a} is a suffix of image of {b}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Unique desubstitution: the preimage `u` with `apply(u) = w`.
    ///
    /// The image set must be a bifix code (checked eagerly). Decoding is
    /// greedy left-to-right; the prefix-code property makes the match at
    /// each position unique, the suffix-code property makes the overall
    /// preimage unique.
    pub fn decode_bifix(&self, w: &Word) -> Result<Word> {
        self.image_set_is_bifix()?;
        let letters = w.letters();
        let mut pos = 0;
        let mut out = Vec::new();
        while pos < letters.len() {
            let mut matched = None;
            for (a, img) in self.images.iter().enumerate() {
                if letters[pos..].starts_with(img.letters()) {
                    matched = Some(a as u8);
                    break;
                }
            }
            match matched {
                Some(a) => {
                    pos += self.images[a as usize].len();
                    out.push(a);
                }
                None => return Err(Error::NotInImage(pos)),
            }
        }
        Ok(Word {
            alphabet: self.domain,
            letters: out,
        })
    }

    /// Parse the one-rule-per-line text format `<letter> -> <image>`.
    /// Blank lines and `#` comments are ignored; the alphabet is inferred
    /// as `0..=max` letter used on either side, and every inferred letter
    /// must have a rule.
    pub fn parse(text: &str) -> Result<Morphism> {
        let mut rules: Vec<(u8, Vec<u8>)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (lhs, rhs) = line.split_once("->").ok_or_else(|| {
                Error::MorphismParse(format!("line {}: missing '->'", lineno + 1))
            })?;
            let letter: u8 = lhs.trim().parse().map_err(|_| {
                Error::MorphismParse(format!("line {}: bad letter {:?}", lineno + 1, lhs.trim()))
            })?;
            let mut image = Vec::new();
            for c in rhs.trim().chars() {
                let d = c.to_digit(10).ok_or_else(|| {
                    Error::MorphismParse(format!("line {}: bad image char {c:?}", lineno + 1))
                })?;
                image.push(d as u8);
            }
            if rules.iter().any(|(l, _)| *l == letter) {
                return Err(Error::MorphismParse(format!(
                    "line {}: duplicate rule for letter {letter}",
                    lineno + 1
                )));
            }
            rules.push((letter, image));
        }
        if rules.is_empty() {
            return Err(Error::MorphismParse("no rules".into()));
        }
        let max_letter = rules
            .iter()
            .flat_map(|(l, img)| std::iter::once(*l).chain(img.iter().copied()))
            .max()
            .unwrap();
        let size = (max_letter as usize + 1).max(2);
        let alphabet = Alphabet::new(size)?;
        let mut images = vec![None; size];
        for (l, img) in rules {
            images[l as usize] = Some(img);
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(l, img)| {
                img.map(|letters| Word { alphabet, letters }).ok_or_else(|| {
                    Error::MorphismParse(format!("no rule for letter {l} (alphabet 0..{size})"))
                })
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Morphism::new(alphabet, alphabet, images)
    }

    /// Render in the same text format `parse` accepts.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (a, img) in self.images.iter().enumerate() {
            out.push_str(&format!("{a} -> {img}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn s4() -> Alphabet {
        Alphabet::new(4).unwrap()
    }

    #[test]
    fn alphabet_bounds() {
        assert!(Alphabet::new(1).is_err());
        assert!(Alphabet::new(256).is_err());
        assert!(Alphabet::new(2).is_ok());
        assert!(Alphabet::new(255).is_ok());
    }

    #[test]
    fn word_rejects_foreign_letters() {
        assert!(Word::new(s4(), vec![0, 4]).is_err());
        assert!(Word::new(s4(), vec![]).is_ok());
    }

    #[test]
    fn apply_g() {
        let g = catalog::morphism("g").unwrap();
        let w = Word::from_digits("0", s4()).unwrap();
        assert_eq!(g.apply(&w).unwrap().to_string(), "0121");
        assert_eq!(g.apply(&Word::empty(s4())).unwrap().to_string(), "");
        let w = Word::from_digits("23", s4()).unwrap();
        assert_eq!(g.apply(&w).unwrap().to_string(), "0130302");
    }

    #[test]
    fn apply_rejects_foreign_letter() {
        let h = catalog::morphism("h").unwrap();
        let w = Word::new(s4(), vec![3]).unwrap();
        assert!(h.apply(&w).is_err());
    }

    #[test]
    fn compose_tables() {
        let h = catalog::morphism("h").unwrap();
        let hp = catalog::morphism("h'").unwrap();
        let hph = Morphism::compose(&hp, &h).unwrap();
        assert_eq!(hph.image(0).unwrap().to_string(), "210201");
        assert_eq!(hph.image(1).unwrap().to_string(), "2101");
        assert_eq!(hph.image(2).unwrap().to_string(), "20");
        let hhp = Morphism::compose(&h, &hp).unwrap();
        assert_eq!(hhp.image(0).unwrap().to_string(), "102012");
    }

    #[test]
    fn compose_identity() {
        let h = catalog::morphism("h").unwrap();
        let id = Morphism::identity(h.domain());
        assert_eq!(Morphism::compose(&id, &h).unwrap(), h);
        assert_eq!(Morphism::compose(&h, &id).unwrap(), h);
    }

    #[test]
    fn compose_alphabet_mismatch() {
        let g = catalog::morphism("g").unwrap();
        let h = catalog::morphism("h").unwrap();
        assert!(Morphism::compose(&g, &h).is_err());
    }

    #[test]
    fn prolongability() {
        let g = catalog::morphism("g").unwrap();
        assert!(g.prolongable_at(0));
        assert!(!g.prolongable_at(1));
        let hp = catalog::morphism("h'").unwrap();
        assert!(!hp.prolongable_at(0));
    }

    #[test]
    fn g_images_form_bifix_code() {
        let g = catalog::morphism("g").unwrap();
        g.image_set_is_bifix().unwrap();
    }

    #[test]
    fn bifix_check_rejects_prefix_and_suffix_overlaps() {
        let s2 = Alphabet::new(2).unwrap();
        let m = Morphism::from_digit_images(s2, &["01", "0"]).unwrap();
        assert!(m.image_set_is_bifix().is_err()); // 0 is a prefix of 01
        let m = Morphism::from_digit_images(s2, &["01", "1"]).unwrap();
        assert!(m.image_set_is_bifix().is_err()); // 1 is a suffix of 01
        let m = Morphism::from_digit_images(s2, &["01", ""]).unwrap();
        assert!(m.image_set_is_bifix().is_err());
    }

    #[test]
    fn decode_examples() {
        let g = catalog::morphism("g").unwrap();
        let w = Word::from_digits("0121032", s4()).unwrap();
        assert_eq!(g.decode_bifix(&w).unwrap().to_string(), "01");
        assert_eq!(
            g.decode_bifix(&Word::empty(s4())).unwrap().to_string(),
            ""
        );
        let w = Word::from_digits("012", s4()).unwrap();
        assert!(matches!(g.decode_bifix(&w), Err(Error::NotInImage(_))));
    }

    #[test]
    fn decode_roundtrip_exhaustive() {
        // decode(apply(u)) = u for all u over Sigma_4 of length <= 8.
        let g = catalog::morphism("g").unwrap();
        for len in 0..=8usize {
            let count = 4usize.pow(len as u32);
            // don't walk all 65536 in the longest class every time; stride keeps it quick
            let stride = if len == 8 { 7 } else { 1 };
            let mut code = 0;
            while code < count {
                let letters: Vec<u8> = (0..len).map(|i| ((code >> (2 * i)) & 3) as u8).collect();
                let u = Word::new(s4(), letters).unwrap();
                let img = g.apply(&u).unwrap();
                assert_eq!(g.decode_bifix(&img).unwrap(), u);
                code += stride;
            }
        }
    }

    #[test]
    fn parse_and_render() {
        let text = "# the morphism g\n0 -> 0121\n1 -> 032\n\n2 -> 013\n3 -> 0302\n";
        let m = Morphism::parse(text).unwrap();
        assert_eq!(m, catalog::morphism("g").unwrap());
        let again = Morphism::parse(&m.render()).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn parse_rejects_gaps_and_garbage() {
        assert!(Morphism::parse("0 -> 01\n2 -> 1\n").is_err()); // no rule for 1
        assert!(Morphism::parse("0 => 01\n").is_err());
        assert!(Morphism::parse("").is_err());
        assert!(Morphism::parse("0 -> 01\n0 -> 10\n1 -> 0\n").is_err());
    }
}
