//! Exhaustive and random generation of loops in reduced form.
//!
//! A reduced table has row 0 and column 0 in natural order, so element 0 is
//! the identity. Every loop of order `n` is isomorphic to at least one
//! reduced table, so scanning reduced tables covers all loops up to
//! isomorphism. Tables are produced in lexicographic order of their
//! row-major entries by a cell-by-cell backtracker over row and column
//! availability bitmasks.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LoopError, Result};
use crate::isomorphy::is_canonical;
use crate::loops::FiniteLoop;

/// Largest order [`enumerate_loops`] accepts without an override.
pub const REDUCED_ORDER_CAP: usize = 7;
/// Largest order [`enumerate_up_to_isomorphism`] accepts without an override.
pub const ISO_ORDER_CAP: usize = 6;
const MASK_BITS: usize = 32;

const UNSET: u8 = u8::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnumerationMode {
    Reduced,
    UpToIsomorphism,
}

/// Restartable position in an enumeration stream.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationCursor {
    pub order: usize,
    pub mode: EnumerationMode,
    pub emitted: u64,
    /// Row-major table of the last emitted loop.
    pub last: Option<Vec<usize>>,
}

impl EnumerationCursor {
    pub fn new(order: usize, mode: EnumerationMode) -> Result<Self> {
        let cap = match mode {
            EnumerationMode::Reduced => REDUCED_ORDER_CAP,
            EnumerationMode::UpToIsomorphism => ISO_ORDER_CAP,
        };
        if order > cap {
            return Err(LoopError::OrderTooLarge { order, cap });
        }
        Self::new_unbounded(order, mode)
    }

    /// Skips the desk-scale caps. Orders above 32 are still rejected.
    pub fn new_unbounded(order: usize, mode: EnumerationMode) -> Result<Self> {
        if order == 0 {
            return Err(LoopError::OrderTooSmall);
        }
        if order > MASK_BITS {
            return Err(LoopError::OrderTooLarge {
                order,
                cap: MASK_BITS,
            });
        }
        Ok(Self {
            order,
            mode,
            emitted: 0,
            last: None,
        })
    }

    pub fn stream(&self) -> Result<LoopStream> {
        let mut squares = ReducedSquares::new(self.order, &[], self.order);
        if let Some(last) = &self.last {
            squares.resume_from(last)?;
        }
        Ok(LoopStream {
            squares,
            mode: self.mode,
            emitted: self.emitted,
        })
    }
}

/// Deterministic stream of loops; see [`LoopStream::cursor`] for resuming.
pub struct LoopStream {
    squares: ReducedSquares,
    mode: EnumerationMode,
    emitted: u64,
}

impl LoopStream {
    pub fn cursor(&self) -> EnumerationCursor {
        EnumerationCursor {
            order: self.squares.n,
            mode: self.mode,
            emitted: self.emitted,
            last: self.squares.last_emitted(),
        }
    }
}

impl Iterator for LoopStream {
    type Item = FiniteLoop;

    fn next(&mut self) -> Option<FiniteLoop> {
        loop {
            let table = self.squares.next_table()?;
            if self.mode == EnumerationMode::UpToIsomorphism && !is_canonical(self.squares.n, &table) {
                continue;
            }
            self.emitted += 1;
            return Some(FiniteLoop::from_flat_unchecked(self.squares.n, table));
        }
    }
}

/// All reduced loops of order `n` (`1 ≤ n ≤ 7`), lexicographically.
pub fn enumerate_loops(n: usize) -> Result<LoopStream> {
    EnumerationCursor::new(n, EnumerationMode::Reduced)?.stream()
}

/// One canonical representative per isomorphism class (`n ≤ 6`).
pub fn enumerate_up_to_isomorphism(n: usize) -> Result<LoopStream> {
    EnumerationCursor::new(n, EnumerationMode::UpToIsomorphism)?.stream()
}

/// Same sequence as [`enumerate_loops`], computed by splitting on row 1 and
/// enumerating each subtree on the rayon pool.
pub fn enumerate_loops_par(n: usize) -> Result<Vec<FiniteLoop>> {
    EnumerationCursor::new(n, EnumerationMode::Reduced)?;
    Ok(enumerate_par_unchecked(n, EnumerationMode::Reduced))
}

pub fn enumerate_up_to_isomorphism_par(n: usize) -> Result<Vec<FiniteLoop>> {
    EnumerationCursor::new(n, EnumerationMode::UpToIsomorphism)?;
    Ok(enumerate_par_unchecked(n, EnumerationMode::UpToIsomorphism))
}

fn enumerate_par_unchecked(n: usize, mode: EnumerationMode) -> Vec<FiniteLoop> {
    if n <= 2 {
        return EnumerationCursor::new_unbounded(n, mode)
            .and_then(|c| c.stream())
            .map(|s| s.collect())
            .unwrap_or_default();
    }
    let mut prefixes = Vec::new();
    let mut rows01 = ReducedSquares::new(n, &[], 2);
    while let Some(t) = rows01.next_table() {
        prefixes.push(t[n..2 * n].to_vec());
    }
    prefixes
        .par_iter()
        .map(|row1| {
            let mut sub = ReducedSquares::new(n, std::slice::from_ref(row1), n);
            let mut out = Vec::new();
            while let Some(t) = sub.next_table() {
                if mode == EnumerationMode::UpToIsomorphism && !is_canonical(n, &t) {
                    continue;
                }
                out.push(FiniteLoop::from_flat_unchecked(n, t));
            }
            out
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Phase {
    Fresh,
    Running,
    Done,
}

/// Backtracker over reduced Latin squares with rows `0..fixed` preset and
/// free cells in rows `fixed..upto`.
struct ReducedSquares {
    n: usize,
    cells: Vec<(usize, usize)>,
    table: Vec<u8>,
    row_mask: Vec<u32>,
    col_mask: Vec<u32>,
    pos: usize,
    phase: Phase,
}

impl ReducedSquares {
    /// `prefix` holds rows `1..1 + prefix.len()` in full.
    fn new(n: usize, prefix: &[Vec<usize>], upto: usize) -> Self {
        let mut table = vec![UNSET; n * n];
        let mut row_mask = vec![0u32; n];
        let mut col_mask = vec![0u32; n];
        let mut set = |table: &mut Vec<u8>, r: usize, c: usize, v: usize| {
            table[r * n + c] = v as u8;
            row_mask[r] |= 1 << v;
            col_mask[c] |= 1 << v;
        };
        for c in 0..n {
            set(&mut table, 0, c, c);
        }
        for r in 1..n {
            set(&mut table, r, 0, r);
        }
        for (i, row) in prefix.iter().enumerate() {
            for (c, &v) in row.iter().enumerate().skip(1) {
                set(&mut table, i + 1, c, v);
            }
        }
        let fixed = 1 + prefix.len();
        let cells = (fixed..upto.min(n))
            .flat_map(|r| (1..n).map(move |c| (r, c)))
            .collect();
        Self {
            n,
            cells,
            table,
            row_mask,
            col_mask,
            pos: 0,
            phase: Phase::Fresh,
        }
    }

    fn resume_from(&mut self, last: &[usize]) -> Result<()> {
        if last.len() != self.n * self.n {
            return Err(LoopError::Parse("cursor table has the wrong size".into()));
        }
        for &(r, c) in &self.cells {
            let v = last[r * self.n + c];
            if v >= self.n || (self.row_mask[r] | self.col_mask[c]) & (1 << v) != 0 {
                return Err(LoopError::Parse("cursor table is not a reduced Latin square".into()));
            }
            self.table[r * self.n + c] = v as u8;
            self.row_mask[r] |= 1 << v;
            self.col_mask[c] |= 1 << v;
        }
        self.phase = Phase::Running;
        Ok(())
    }

    fn last_emitted(&self) -> Option<Vec<usize>> {
        (self.phase == Phase::Running && self.table.iter().all(|&v| v != UNSET))
            .then(|| self.table.iter().map(|&v| v as usize).collect())
    }

    fn next_table(&mut self) -> Option<Vec<usize>> {
        match self.phase {
            Phase::Done => return None,
            Phase::Fresh => {
                self.phase = Phase::Running;
                if self.cells.is_empty() {
                    return Some(self.snapshot());
                }
                self.pos = 0;
            }
            Phase::Running => {
                if self.cells.is_empty() {
                    self.phase = Phase::Done;
                    return None;
                }
                self.pos = self.cells.len() - 1;
            }
        }
        let n = self.n;
        let full: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };
        loop {
            let (r, c) = self.cells[self.pos];
            let idx = r * n + c;
            let cur = self.table[idx];
            let start = if cur == UNSET {
                0
            } else {
                self.row_mask[r] &= !(1 << cur);
                self.col_mask[c] &= !(1 << cur);
                cur as u32 + 1
            };
            let above = if start >= 32 { 0 } else { u32::MAX << start };
            let avail = !(self.row_mask[r] | self.col_mask[c]) & full & above;
            if avail != 0 {
                let s = avail.trailing_zeros();
                self.table[idx] = s as u8;
                self.row_mask[r] |= 1 << s;
                self.col_mask[c] |= 1 << s;
                if self.pos + 1 == self.cells.len() {
                    return Some(self.snapshot());
                }
                self.pos += 1;
            } else {
                self.table[idx] = UNSET;
                if self.pos == 0 {
                    self.phase = Phase::Done;
                    return None;
                }
                self.pos -= 1;
            }
        }
    }

    fn snapshot(&self) -> Vec<usize> {
        self.table
            .iter()
            .map(|&v| if v == UNSET { 0 } else { v as usize })
            .collect()
    }
}

const RANDOM_RESTARTS: usize = 200;
const RANDOM_MAX_ORDER: usize = 64;

/// A random reduced loop of order `n`, deterministic in `(n, seed)`.
///
/// Cells are filled in row-major order with symbols tried in a shuffled
/// order, backtracking on dead ends and restarting after a step budget.
/// The resulting distribution is not uniform over reduced Latin squares:
/// tables reachable through fewer dead ends are favoured.
pub fn random_loop(n: usize, seed: u64) -> Result<FiniteLoop> {
    if n == 0 {
        return Err(LoopError::OrderTooSmall);
    }
    if n > RANDOM_MAX_ORDER {
        return Err(LoopError::OrderTooLarge {
            order: n,
            cap: RANDOM_MAX_ORDER,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((n as u64) << 56));
    let budget = 200 * n * n;
    for _ in 0..RANDOM_RESTARTS {
        if let Some(table) = random_attempt(n, &mut rng, budget) {
            return Ok(FiniteLoop::from_flat_unchecked(n, table));
        }
    }
    Err(LoopError::GenerationFailure {
        order: n,
        restarts: RANDOM_RESTARTS,
    })
}

fn random_attempt(n: usize, rng: &mut ChaCha8Rng, budget: usize) -> Option<Vec<usize>> {
    let mut table = vec![0usize; n * n];
    let mut row_mask = vec![0u64; n];
    let mut col_mask = vec![0u64; n];
    for c in 0..n {
        table[c] = c;
        row_mask[0] |= 1 << c;
        col_mask[c] |= 1 << c;
    }
    for r in 1..n {
        table[r * n] = r;
        row_mask[r] |= 1 << r;
        col_mask[0] |= 1 << r;
    }
    let cells: Vec<(usize, usize)> = (1..n).flat_map(|r| (1..n).map(move |c| (r, c))).collect();
    if cells.is_empty() {
        return Some(table);
    }
    // per depth: shuffled candidates and the index of the one in use
    let mut stack: Vec<(Vec<usize>, usize)> = Vec::with_capacity(cells.len());
    let mut steps = 0;
    let candidates = |r: usize, c: usize, rm: &[u64], cm: &[u64], rng: &mut ChaCha8Rng| {
        let used = rm[r] | cm[c];
        let mut v: Vec<usize> = (0..n).filter(|&s| used & (1 << s) == 0).collect();
        v.shuffle(rng);
        v
    };
    let (r0, c0) = cells[0];
    stack.push((candidates(r0, c0, &row_mask, &col_mask, rng), usize::MAX));
    while !stack.is_empty() {
        steps += 1;
        if steps > budget {
            return None;
        }
        let depth = stack.len() - 1;
        let (cands, idx) = &mut stack[depth];
        let (r, c) = cells[depth];
        if *idx != usize::MAX {
            let s = cands[*idx];
            row_mask[r] &= !(1 << s);
            col_mask[c] &= !(1 << s);
        }
        let next = idx.wrapping_add(1);
        if next >= cands.len() {
            stack.pop();
            continue;
        }
        *idx = next;
        let s = cands[next];
        table[r * n + c] = s;
        row_mask[r] |= 1 << s;
        col_mask[c] |= 1 << s;
        if depth + 1 == cells.len() {
            return Some(table);
        }
        let (nr, nc) = cells[depth + 1];
        let cands = candidates(nr, nc, &row_mask, &col_mask, rng);
        stack.push((cands, usize::MAX));
    }
    None
}
