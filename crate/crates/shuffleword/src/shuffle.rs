//! Shuffle relations between infinite words.
//!
//! A word `z` is a shuffle of `x` and `y` when it admits a block
//! factorization `z = U_0 V_0 U_1 V_1 ...` with `x = U_0 U_1 ...` and
//! `y = V_0 V_1 ...`. On finite prefixes the block boundaries are
//! irrelevant (blocks merge and split freely), so the prefix semantics
//! reduce to the two-source interleaving DP over split states `(i, j)`.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::catalog;
use crate::error::Error;
use crate::stream::{BlockPart, WordStream};
use crate::word::{Alphabet, Word};
use crate::Result;

/// A (possibly infinite) sequence of block pairs `(U_i, V_i)`.
#[derive(Clone)]
pub struct BlockSchedule {
    blocks: Arc<dyn Fn(usize) -> Option<(Word, Word)> + Send + Sync>,
}

impl BlockSchedule {
    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(usize) -> Option<(Word, Word)> + Send + Sync + 'static,
    {
        BlockSchedule {
            blocks: Arc::new(f),
        }
    }

    pub fn from_pairs(pairs: Vec<(Word, Word)>) -> Self {
        BlockSchedule {
            blocks: Arc::new(move |i| pairs.get(i).cloned()),
        }
    }

    pub fn block(&self, i: usize) -> Option<(Word, Word)> {
        (self.blocks)(i)
    }

    /// One block pair per line: `U[i]=<word> V[i]=<word>`.
    pub fn dump(&self, count: usize) -> String {
        let mut out = String::new();
        for i in 0..count {
            match self.block(i) {
                Some((u, v)) => {
                    let _ = writeln!(out, "U[{i}]={u} V[{i}]={v}");
                }
                None => break,
            }
        }
        out
    }

    /// The interleaved product `U_0 V_0 U_1 V_1 ...` as a stream.
    pub fn interleaved(&self, alphabet: Alphabet) -> WordStream {
        WordStream::from_blocks(alphabet, self.clone(), BlockPart::Interleaved)
    }

    /// The left product `U_0 U_1 ...` as a stream.
    pub fn left_product(&self, alphabet: Alphabet) -> WordStream {
        WordStream::from_blocks(alphabet, self.clone(), BlockPart::Left)
    }

    /// The right product `V_0 V_1 ...` as a stream.
    pub fn right_product(&self, alphabet: Alphabet) -> WordStream {
        WordStream::from_blocks(alphabet, self.clone(), BlockPart::Right)
    }
}

/// The set of split states `(i, j)` with `i + j = n` certifying that the
/// length-`n` prefix of `z` interleaves the length-`i` prefix of `x` with
/// the length-`j` prefix of `y`. Stored as one bit per state on the
/// anti-diagonal, indexed by `i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ShuffleFrontier {
    level: usize,
    bits: Vec<u64>,
}

impl ShuffleFrontier {
    fn initial() -> Self {
        ShuffleFrontier {
            level: 0,
            bits: vec![1],
        }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        i + j == self.level && self.bit(i)
    }

    fn bit(&self, i: usize) -> bool {
        i <= self.level && (self.bits[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn states(&self) -> Vec<(usize, usize)> {
        (0..=self.level)
            .filter(|&i| self.bit(i))
            .map(|i| (i, self.level - i))
            .collect()
    }

    /// `max min(i, j)` over the frontier, or `None` when empty.
    pub fn balance(&self) -> Option<usize> {
        (0..=self.level)
            .filter(|&i| self.bit(i))
            .map(|i| i.min(self.level - i))
            .max()
    }

    fn advance(&self, c: u8, x: &[u8], y: &[u8]) -> ShuffleFrontier {
        let level = self.level + 1;
        let mut bits = vec![0u64; level / 64 + 1];
        for i in 0..=self.level {
            if !self.bit(i) {
                continue;
            }
            let j = self.level - i;
            if x[i] == c {
                bits[(i + 1) / 64] |= 1 << ((i + 1) % 64);
            }
            if y[j] == c {
                bits[i / 64] |= 1 << (i % 64);
            }
        }
        ShuffleFrontier { level, bits }
    }
}

/// The full frontier at level `n` for target `z` and sources `x`, `y`.
pub fn shuffle_frontier(
    z: &WordStream,
    x: &WordStream,
    y: &WordStream,
    n: usize,
) -> Result<ShuffleFrontier> {
    let zp = z.prefix_letters(n)?;
    let xp = x.prefix_letters(n)?;
    let yp = y.prefix_letters(n)?;
    let mut frontier = ShuffleFrontier::initial();
    for &c in &zp {
        frontier = frontier.advance(c, &xp, &yp);
        if frontier.is_empty() {
            // monotone decay: once empty, empty forever; fast-forward
            frontier.level = n;
            frontier.bits = vec![0u64; n / 64 + 1];
            break;
        }
    }
    Ok(frontier)
}

/// Necessary (not sufficient) finite-depth condition for `z` being a
/// shuffle of `x` and `y`.
pub fn is_shuffle_to_depth(
    z: &WordStream,
    x: &WordStream,
    y: &WordStream,
    n: usize,
) -> Result<bool> {
    Ok(!shuffle_frontier(z, x, y, n)?.is_empty())
}

/// True iff the finite word `z` is an interleaving of `x` and `y` with
/// both fully consumed.
pub fn exact_finite_shuffle(z: &Word, x: &Word, y: &Word) -> Result<bool> {
    if z.len() != x.len() + y.len() {
        return Err(Error::InvalidInput(format!(
            "|z| = {} but |x| + |y| = {}",
            z.len(),
            x.len() + y.len()
        )));
    }
    let (zs, xs, ys) = (z.letters(), x.letters(), y.letters());
    // cheap reject: the letter multisets must agree
    let mut counts = [0i64; 256];
    for &c in zs {
        counts[c as usize] += 1;
    }
    for &c in xs.iter().chain(ys) {
        counts[c as usize] -= 1;
    }
    if counts.iter().any(|&c| c != 0) {
        return Ok(false);
    }
    let mut reach = vec![false; xs.len() + 1];
    reach[0] = true;
    for (t, &c) in zs.iter().enumerate() {
        let mut next = vec![false; xs.len() + 1];
        let lo = t.saturating_sub(ys.len());
        for i in lo..=t.min(xs.len()) {
            if !reach[i] {
                continue;
            }
            let j = t - i;
            if i < xs.len() && xs[i] == c {
                next[i + 1] = true;
            }
            if j < ys.len() && ys[j] == c {
                next[i] = true;
            }
        }
        reach = next;
    }
    Ok(reach[xs.len()])
}

/// The balanced-survival statistic `b(1), ..., b(N)` where `b(n)` is the
/// largest `min(i, j)` over frontier states at level `n` (`None` once the
/// frontier is empty).
///
/// A bounded tail is finite evidence consistent with `z` not being a
/// shuffle of `x` and `y` with both sources genuinely consumed; growth on
/// the order of `n/2` is consistent with membership. Neither is a proof.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SurvivalCurve {
    values: Vec<Option<usize>>,
}

impl SurvivalCurve {
    pub fn values(&self) -> &[Option<usize>] {
        &self.values
    }

    pub fn value(&self, n: usize) -> Option<usize> {
        self.values[n - 1]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Start of the longest constant tail, as `(n0, value)`.
    pub fn constant_tail(&self) -> Option<(usize, Option<usize>)> {
        let last = *self.values.last()?;
        let mut n0 = self.values.len();
        while n0 > 1 && self.values[n0 - 2] == last {
            n0 -= 1;
        }
        Some((n0, last))
    }

    /// CSV rendering `n,b` with `-inf` for empty frontiers.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,b\n");
        for (idx, v) in self.values.iter().enumerate() {
            match v {
                Some(b) => {
                    let _ = writeln!(out, "{},{}", idx + 1, b);
                }
                None => {
                    let _ = writeln!(out, "{},-inf", idx + 1);
                }
            }
        }
        out
    }
}

pub fn survival_curve(
    z: &WordStream,
    x: &WordStream,
    y: &WordStream,
    depth: usize,
) -> Result<SurvivalCurve> {
    if depth == 0 {
        return Err(Error::InvalidInput("survival curve needs depth >= 1".into()));
    }
    let zp = z.prefix_letters(depth)?;
    let xp = x.prefix_letters(depth)?;
    let yp = y.prefix_letters(depth)?;
    let mut frontier = ShuffleFrontier::initial();
    let mut values = Vec::with_capacity(depth);
    let mut dead = false;
    for &c in &zp {
        if dead {
            values.push(None);
            continue;
        }
        frontier = frontier.advance(c, &xp, &yp);
        let b = frontier.balance();
        dead = b.is_none();
        values.push(b);
    }
    Ok(SurvivalCurve { values })
}

/// Identifies one of the three block products in a factorization report.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ProductId {
    /// `U_0 V_0 U_1 V_1 ...`, compared against `z`
    Interleaved,
    /// `U_0 U_1 ...`, compared against `x`
    Left,
    /// `V_0 V_1 ...`, compared against `y`
    Right,
}

impl ProductId {
    pub fn label(&self) -> &'static str {
        match self {
            ProductId::Interleaved => "z",
            ProductId::Left => "x",
            ProductId::Right => "y",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Mismatch {
    pub product: ProductId,
    pub position: usize,
    pub expected: u8,
    pub actual: u8,
}

/// Result of checking a block schedule against three streams.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FactorizationReport {
    pub requested_depth: usize,
    /// Letters of each product checked against its stream (capped at the
    /// requested depth): interleaved, left, right.
    pub covered: [usize; 3],
    pub blocks_used: usize,
    pub mismatch: Option<Mismatch>,
}

impl FactorizationReport {
    pub fn verified(&self) -> bool {
        self.mismatch.is_none() && self.covered.iter().all(|&c| c >= self.requested_depth)
    }
}

/// Consumes blocks until each of the three products covers `depth`
/// letters and verifies them letterwise against `z`, `x` and `y`.
pub fn verify_block_factorization(
    z: &WordStream,
    x: &WordStream,
    y: &WordStream,
    schedule: &BlockSchedule,
    depth: usize,
) -> Result<FactorizationReport> {
    if depth == 0 {
        return Err(Error::InvalidInput("verification depth must be >= 1".into()));
    }
    let mut covered = [0usize; 3]; // interleaved, left, right
    let mut blocks_used = 0;
    let streams = [z, x, y];
    while covered.iter().any(|&c| c < depth) {
        let Some((u, v)) = schedule.block(blocks_used) else {
            return Err(Error::ExhaustedSchedule {
                blocks: blocks_used,
                covered: covered[0],
                requested: depth,
            });
        };
        blocks_used += 1;
        for (product, part) in [
            (ProductId::Interleaved, u.letters()),
            (ProductId::Left, u.letters()),
            (ProductId::Right, v.letters()),
            (ProductId::Interleaved, v.letters()),
        ] {
            let slot = match product {
                ProductId::Interleaved => 0,
                ProductId::Left => 1,
                ProductId::Right => 2,
            };
            for &actual in part {
                let position = covered[slot];
                if position >= depth {
                    covered[slot] = position + 1;
                    continue;
                }
                let expected = streams[slot].letter_at(position)?;
                if expected != actual {
                    return Ok(FactorizationReport {
                        requested_depth: depth,
                        covered,
                        blocks_used,
                        mismatch: Some(Mismatch {
                            product,
                            position,
                            expected,
                            actual,
                        }),
                    });
                }
                covered[slot] = position + 1;
            }
        }
    }
    Ok(FactorizationReport {
        requested_depth: depth,
        covered: covered.map(|c| c.min(depth)),
        blocks_used,
        mismatch: None,
    })
}

/// The explicit self-shuffle of the square-free fixed point of `g` over
/// four letters: `U_0 = g^2(0)`, `U_1 = 0`, then six-periodic families of
/// blocks obtained by applying powers of `g` to fixed short seed words
/// (with left-quotients `v^{-1}u` resolved once at construction).
pub fn self_shuffle_witness_g() -> BlockSchedule {
    let g = catalog::morphism("g").expect("catalog morphism g");
    let a4 = g.domain();
    let word = |s: &str| Word::from_digits(s, a4).expect("witness seed word");
    let left_quotient = |v: &Word, u: &Word| -> Word {
        assert!(v.is_prefix_of(u), "left quotient undefined");
        u.factor(v.len(), u.len())
    };
    let zero = word("0");
    let g0 = g.apply(&zero).unwrap();
    // U_{6i+2} .. U_{6i+7} seeds, applied under g^i (last one under g^{i+1})
    let u_seeds: [Word; 6] = [
        left_quotient(&zero, &g0).concat(&zero),                      // 0^-1 g(0) 0
        left_quotient(&zero, &g.apply(&word("3")).unwrap()).concat(&zero), // 0^-1 g(3) 0
        left_quotient(&zero, &g.apply(&word("201")).unwrap()).concat(&zero), // 0^-1 g(201) 0
        word("30"),
        word("2").concat(&g.apply(&word("03")).unwrap()), // 2 g(03)
        word("20"),                                        // under g^{i+1}
    ];
    let v_seeds: [Word; 6] = [
        left_quotient(&zero, &g.apply(&word("1")).unwrap()).concat(&zero), // 0^-1 g(1) 0
        left_quotient(&zero, &g.apply(&word("03")).unwrap()).concat(&zero), // 0^-1 g(03) 0
        word("1"),
        word("3"),
        word("0"),                                         // under g^{i+1}
        left_quotient(&zero, &g.apply(&word("2")).unwrap()).concat(&zero), // under g^{i+1}
    ];
    let u0 = g.apply_power(2, &zero).unwrap();
    let u1 = zero.clone();
    let v0 = g0.concat(&word("03"));
    let v1 = word("2").concat(&g.apply(&word("2")).unwrap()).concat(&zero);
    BlockSchedule::from_fn(move |m| {
        let pair = |u: Word, v: Word| Some((u, v));
        match m {
            0 => pair(u0.clone(), v0.clone()),
            1 => pair(u1.clone(), v1.clone()),
            _ => {
                let (i, r) = ((m - 2) / 6, (m - 2) % 6);
                let u_power = if r == 5 { i + 1 } else { i };
                let v_power = if r >= 4 { i + 1 } else { i };
                let u = g.apply_power(u_power, &u_seeds[r]).unwrap();
                let v = g.apply_power(v_power, &v_seeds[r]).unwrap();
                pair(u, v)
            }
        }
    })
}

/// The explicit shuffle producing the Hall word from two words in its
/// shift orbit closure: `U_0 = 01`, `U_1 = h'(0)`, `U_2 = h'(1)`,
/// `V_0 = h'(1)`, and `U_{i+3} = V_{i+1} = h'^2(h^i(1))`.
pub fn hall_shuffle_witness() -> BlockSchedule {
    let h = catalog::morphism("h").expect("catalog morphism h");
    let hp = catalog::morphism("h'").expect("catalog morphism h'");
    let a3 = h.domain();
    let one = Word::from_digits("1", a3).unwrap();
    let u0 = Word::from_digits("01", a3).unwrap();
    let u1 = hp.image(0).unwrap().clone();
    let u2 = hp.image(1).unwrap().clone();
    let v0 = hp.image(1).unwrap().clone();
    let tail = move |i: usize| -> Word {
        let inner = h.apply_power(i, &one).unwrap();
        hp.apply_power(2, &inner).unwrap()
    };
    BlockSchedule::from_fn(move |m| {
        let u = match m {
            0 => u0.clone(),
            1 => u1.clone(),
            2 => u2.clone(),
            _ => tail(m - 3),
        };
        let v = match m {
            0 => v0.clone(),
            _ => tail(m - 1),
        };
        Some((u, v))
    })
}

/// A finite truncation of an inductively built shuffle of a recurrent
/// word with two words from its shift orbit closure.
#[derive(Clone, Debug)]
pub struct BuiltShuffle {
    pub blocks: Vec<(Word, Word)>,
    /// Occurrence positions per round: entry `k` holds `(i, j)` where `i`
    /// is the position of the latest left-product occurrence and `j` the
    /// position of the latest right-product occurrence.
    pub positions: Vec<(usize, usize)>,
    pub total_len: usize,
    pub left_len: usize,
    pub right_len: usize,
}

impl BuiltShuffle {
    pub fn schedule(&self) -> BlockSchedule {
        BlockSchedule::from_pairs(self.blocks.clone())
    }
}

/// Builds a shuffle factorization of `x` inductively: each round extends
/// `U` up to the next occurrence of the right product and `V` up to the
/// next occurrence of the left product, always taking the smallest
/// admissible occurrence position. Fails with a recurrence-budget error
/// when a needed occurrence does not exist within `search_limit` letters,
/// which signals that `x` may not be recurrent at this scale.
pub fn build_recurrent_shuffle(
    x: &WordStream,
    rounds: usize,
    search_limit: usize,
    seed_prefix: Option<Word>,
) -> Result<BuiltShuffle> {
    if rounds == 0 {
        return Err(Error::InvalidInput("builder needs rounds >= 1".into()));
    }
    let u0 = match seed_prefix {
        Some(w) if !w.is_empty() => w,
        Some(_) => return Err(Error::InvalidInput("seed prefix must be non-empty".into())),
        None => x.prefix(1)?,
    };
    if x.prefix(u0.len())? != u0 {
        return Err(Error::InvalidInput(
            "seed block is not a prefix of the word".into(),
        ));
    }
    let next_occurrence = |factor: &Word, from: usize| -> Result<usize> {
        match x.find_occurrence(factor, from, search_limit)? {
            Some(occ) => Ok(occ.position),
            None => Err(Error::RecurrenceBudgetExceeded {
                factor_len: factor.len(),
                from,
                limit: search_limit,
            }),
        }
    };

    let mut blocks: Vec<(Word, Word)> = Vec::new();
    let mut positions: Vec<(usize, usize)> = Vec::new();

    // round 1: a fresh occurrence of U_0 determines V_0
    let i_first = next_occurrence(&u0, 1)?;
    let v0_end = i_first + u0.len();
    let v0 = x.prefix(v0_end)?.factor(u0.len(), v0_end);
    let mut total = u0.len() + v0.len();
    let mut left_len = u0.len();
    let mut right_len = v0.len();
    let mut left_pos = i_first; // left product occurs here as a suffix of the built prefix
    let mut right_pos = u0.len(); // likewise for the right product
    positions.push((left_pos, right_pos));
    blocks.push((u0, v0));

    for _ in 1..rounds {
        let left_product = concat_side(&blocks, true, x.alphabet());
        let right_product = concat_side(&blocks, false, x.alphabet());

        // U_k runs to the next occurrence of the right product
        let j = next_occurrence(&right_product, right_pos + 1)?;
        let u_end = j + right_len;
        let u = x.prefix(u_end)?.factor(total, u_end);
        let new_left = left_product.concat(&u);
        left_len += u.len();

        // V_k runs to the next occurrence of the extended left product
        let i = next_occurrence(&new_left, left_pos + 1)?;
        let v_end = i + left_len;
        let v = x.prefix(v_end)?.factor(total + u.len(), v_end);
        right_len += v.len();
        total += u.len() + v.len();

        left_pos = i;
        right_pos = j;
        positions.push((i, j));
        blocks.push((u, v));
    }

    Ok(BuiltShuffle {
        blocks,
        positions,
        total_len: total,
        left_len,
        right_len,
    })
}

fn concat_side(blocks: &[(Word, Word)], left: bool, alphabet: Alphabet) -> Word {
    let mut acc = Word::empty(alphabet);
    for (u, v) in blocks {
        acc = acc.concat(if left { u } else { v });
    }
    acc
}
