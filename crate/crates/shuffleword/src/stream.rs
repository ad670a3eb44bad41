//! Lazily extended infinite words.
//!
//! A [`WordStream`] memoizes a single growing prefix buffer behind a mutex:
//! extension is serialized, concurrent readers see a consistent committed
//! prefix, and `prefix(n)` is always a prefix of `prefix(n + 1)`.

use std::sync::{Arc, Mutex, OnceLock};

use crate::error::Error;
use crate::shuffle::BlockSchedule;
use crate::word::{Alphabet, Morphism, Word};
use crate::Result;

/// An occurrence of a factor inside a scanned prefix.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Occurrence {
    pub position: usize,
    pub length: usize,
}

/// Which of the three block products a block-schedule stream yields.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BlockPart {
    /// `U_0 V_0 U_1 V_1 ...`
    Interleaved,
    /// `U_0 U_1 ...`
    Left,
    /// `V_0 V_1 ...`
    Right,
}

type RuleFn = dyn Fn(usize) -> Result<u8> + Send + Sync;

enum Generator {
    FixedPoint {
        morphism: Morphism,
        /// Next buffer position whose image has not been appended yet.
        expanded: usize,
    },
    Image {
        morphism: Morphism,
        source: WordStream,
        consumed: usize,
        stalled: usize,
    },
    Shift {
        source: WordStream,
        offset: usize,
    },
    Rule {
        rule: Arc<RuleFn>,
    },
    Blocks {
        schedule: BlockSchedule,
        part: BlockPart,
        next: usize,
        stalled: usize,
    },
}

struct State {
    buf: Vec<u8>,
    gen: Generator,
}

struct Inner {
    alphabet: Alphabet,
    state: Mutex<State>,
}

/// A deterministic, prefix-monotone infinite word.
#[derive(Clone)]
pub struct WordStream {
    inner: Arc<Inner>,
}

/// How many unproductive generator steps we tolerate before declaring the
/// stream exhausted (e.g. a schedule whose blocks are eventually all empty).
const STALL_LIMIT: usize = 1_000_000;

fn memory_cap_bytes() -> Option<usize> {
    static CAP: OnceLock<Option<usize>> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("SHUFFLEWORD_MAX_MEM_MB")
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .map(|mb| mb.saturating_mul(1024 * 1024))
    })
}

impl WordStream {
    fn from_generator(alphabet: Alphabet, buf: Vec<u8>, gen: Generator) -> Self {
        WordStream {
            inner: Arc::new(Inner {
                alphabet,
                state: Mutex::new(State { buf, gen }),
            }),
        }
    }

    /// The fixed point of `m` iterated from `seed`; `m` must be prolongable
    /// at `seed` (image starts with `seed` and has length at least two).
    pub fn fixed_point(m: &Morphism, seed: u8) -> Result<Self> {
        if m.domain() != m.codomain() {
            return Err(Error::AlphabetMismatch(
                "fixed point requires an endomorphism".into(),
            ));
        }
        if !m.prolongable_at(seed) {
            return Err(Error::NotProlongable(seed));
        }
        let buf = m.image(seed)?.letters().to_vec();
        Ok(Self::from_generator(
            m.domain(),
            buf,
            Generator::FixedPoint {
                morphism: m.clone(),
                expanded: 1,
            },
        ))
    }

    /// The letterwise image of `source` under `m`.
    pub fn image(m: &Morphism, source: &WordStream) -> Result<Self> {
        if m.domain() != source.alphabet() {
            return Err(Error::AlphabetMismatch(
                "morphism domain does not match source alphabet".into(),
            ));
        }
        Ok(Self::from_generator(
            m.codomain(),
            Vec::new(),
            Generator::Image {
                morphism: m.clone(),
                source: source.clone(),
                consumed: 0,
                stalled: 0,
            },
        ))
    }

    /// Stream defined by an explicit position-to-letter rule.
    pub fn from_rule<F>(alphabet: Alphabet, rule: F) -> Self
    where
        F: Fn(usize) -> Result<u8> + Send + Sync + 'static,
    {
        Self::from_generator(
            alphabet,
            Vec::new(),
            Generator::Rule {
                rule: Arc::new(rule),
            },
        )
    }

    /// Periodic repetition of a non-empty finite word.
    pub fn cyclic(w: &Word) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::InvalidInput("cyclic stream of the empty word".into()));
        }
        let alphabet = w.alphabet();
        let letters = w.letters().to_vec();
        Ok(Self::from_rule(alphabet, move |i| {
            Ok(letters[i % letters.len()])
        }))
    }

    pub fn constant(alphabet: Alphabet, letter: u8) -> Result<Self> {
        alphabet.check(letter)?;
        Ok(Self::from_rule(alphabet, move |_| Ok(letter)))
    }

    /// One of the three products of a block schedule.
    pub fn from_blocks(alphabet: Alphabet, schedule: BlockSchedule, part: BlockPart) -> Self {
        Self::from_generator(
            alphabet,
            Vec::new(),
            Generator::Blocks {
                schedule,
                part,
                next: 0,
                stalled: 0,
            },
        )
    }

    /// Stream with the first `k` letters removed.
    pub fn shift(&self, k: usize) -> WordStream {
        if k == 0 {
            return self.clone();
        }
        Self::from_generator(
            self.alphabet(),
            Vec::new(),
            Generator::Shift {
                source: self.clone(),
                offset: k,
            },
        )
    }

    pub fn alphabet(&self) -> Alphabet {
        self.inner.alphabet
    }

    /// First `n` letters. Identical across repeated calls.
    pub fn prefix(&self, n: usize) -> Result<Word> {
        let letters = self.prefix_letters(n)?;
        Word::new(self.alphabet(), letters)
    }

    pub fn prefix_letters(&self, n: usize) -> Result<Vec<u8>> {
        if let Some(cap) = memory_cap_bytes() {
            if n > cap {
                return Err(Error::MemoryBudgetExceeded { requested: n, cap });
            }
        }
        // Shift streams delegate to their source instead of buffering a copy.
        {
            let state = self.inner.state.lock().unwrap();
            if let Generator::Shift { source, offset } = &state.gen {
                let (source, offset) = (source.clone(), *offset);
                drop(state);
                let mut letters = source.prefix_letters(n + offset)?;
                letters.drain(..offset);
                return Ok(letters);
            }
        }
        let mut state = self.inner.state.lock().unwrap();
        while state.buf.len() < n {
            Self::step(&mut state)?;
        }
        Ok(state.buf[..n].to_vec())
    }

    pub fn letter_at(&self, i: usize) -> Result<u8> {
        {
            let state = self.inner.state.lock().unwrap();
            if let Generator::Shift { source, offset } = &state.gen {
                let (source, offset) = (source.clone(), *offset);
                drop(state);
                return source.letter_at(i + offset);
            }
            if i < state.buf.len() {
                return Ok(state.buf[i]);
            }
        }
        let mut state = self.inner.state.lock().unwrap();
        while state.buf.len() <= i {
            Self::step(&mut state)?;
        }
        Ok(state.buf[i])
    }

    fn step(state: &mut State) -> Result<()> {
        let len = state.buf.len();
        match &mut state.gen {
            Generator::FixedPoint { morphism, expanded } => {
                if *expanded >= len {
                    // every remaining letter has been expanded and the buffer
                    // stopped growing: the morphism erased the tail
                    return Err(Error::ExhaustedStream(len));
                }
                let letter = state.buf[*expanded];
                *expanded += 1;
                let img = morphism.image(letter)?.letters().to_vec();
                state.buf.extend_from_slice(&img);
            }
            Generator::Image {
                morphism,
                source,
                consumed,
                stalled,
            } => {
                let letter = source.letter_at(*consumed)?;
                *consumed += 1;
                let img = morphism.image(letter)?.letters().to_vec();
                if img.is_empty() {
                    *stalled += 1;
                    if *stalled > STALL_LIMIT {
                        return Err(Error::ExhaustedStream(len));
                    }
                } else {
                    *stalled = 0;
                }
                state.buf.extend_from_slice(&img);
            }
            Generator::Shift { .. } => unreachable!("shift streams do not buffer"),
            Generator::Rule { rule } => {
                let letter = rule(len)?;
                state.buf.push(letter);
            }
            Generator::Blocks {
                schedule,
                part,
                next,
                stalled,
            } => {
                let Some((u, v)) = schedule.block(*next) else {
                    return Err(Error::ExhaustedStream(len));
                };
                *next += 1;
                match part {
                    BlockPart::Interleaved => {
                        state.buf.extend_from_slice(u.letters());
                        state.buf.extend_from_slice(v.letters());
                    }
                    BlockPart::Left => state.buf.extend_from_slice(u.letters()),
                    BlockPart::Right => state.buf.extend_from_slice(v.letters()),
                }
                if state.buf.len() == len {
                    *stalled += 1;
                    if *stalled > STALL_LIMIT {
                        return Err(Error::ExhaustedStream(len));
                    }
                } else {
                    *stalled = 0;
                }
            }
        }
        Ok(())
    }

    /// Smallest position `p >= from` where `factor` occurs, searching only
    /// inside `prefix(limit)`. `Ok(None)` when there is no such occurrence.
    pub fn find_occurrence(
        &self,
        factor: &Word,
        from: usize,
        limit: usize,
    ) -> Result<Option<Occurrence>> {
        let m = factor.len();
        if from + m > limit {
            return Ok(None);
        }
        if m == 0 {
            return Ok(Some(Occurrence {
                position: from,
                length: 0,
            }));
        }
        let hay = self.prefix_letters(limit)?;
        Ok(kmp_find(&hay[from..], factor.letters()).map(|p| Occurrence {
            position: from + p,
            length: m,
        }))
    }

    /// True iff `candidate` occurs in `prefix(limit)`. Finite-scale evidence
    /// for shift-orbit-closure membership.
    pub fn contains_factor(&self, candidate: &Word, limit: usize) -> Result<bool> {
        Ok(self.find_occurrence(candidate, 0, limit)?.is_some())
    }
}

/// Knuth-Morris-Pratt search; returns the position of the first match.
fn kmp_find(hay: &[u8], needle: &[u8]) -> Option<usize> {
    if needle.is_empty() {
        return Some(0);
    }
    if needle.len() > hay.len() {
        return None;
    }
    let mut fail = vec![0usize; needle.len()];
    let mut k = 0;
    for i in 1..needle.len() {
        while k > 0 && needle[i] != needle[k] {
            k = fail[k - 1];
        }
        if needle[i] == needle[k] {
            k += 1;
        }
        fail[i] = k;
    }
    let mut k = 0;
    for (i, &c) in hay.iter().enumerate() {
        while k > 0 && c != needle[k] {
            k = fail[k - 1];
        }
        if c == needle[k] {
            k += 1;
        }
        if k == needle.len() {
            return Some(i + 1 - k);
        }
    }
    None
}
