//! Partitions as subsets of the positive quadrant, hook lengths, duals,
//! the upward-displacement operator, and the partition attached to
//! Brill-Noether data `(g, r, d, alpha)`.
//!
//! A partition with rows `(r0, r1, ...)` (weakly decreasing, French
//! notation) is identified with its set of boxes
//! `{(x, y) : 1 <= y <= #rows, 1 <= x <= rows[y-1]}`. The closure of a
//! partition additionally contains every lattice point with `x <= 0` or
//! `y <= 0`; membership in the closure is a predicate, closure points are
//! never stored.

use std::fmt;

use num::bigint::{BigInt, BigUint};
use num::{Integer, One, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A box of a Young diagram: column `x`, row `y`, both 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub x: i64,
    pub y: i64,
}

impl Cell {
    pub fn new(x: i64, y: i64) -> Self {
        Cell { x, y }
    }

    /// The diagonal `x - y` of this box.
    pub fn diag(&self) -> i64 {
        self.x - self.y
    }
}

/// A set of integers used to drive displacement: empty, a single integer,
/// or a full congruence class `z + m Z` with `0 <= z < m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ResidueSet {
    Empty,
    Singleton(BigInt),
    Residue { z: i64, m: i64 },
}

impl ResidueSet {
    pub fn empty() -> Self {
        ResidueSet::Empty
    }

    pub fn singleton<T: Into<BigInt>>(z: T) -> Self {
        ResidueSet::Singleton(z.into())
    }

    /// The congruence class of `z` modulo `m > 0`, stored with the
    /// representative normalized into `[0, m)`.
    pub fn residue(z: i64, m: i64) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidModulus(m));
        }
        Ok(ResidueSet::Residue {
            z: z.rem_euclid(m),
            m,
        })
    }

    pub fn contains(&self, d: i64) -> bool {
        match self {
            ResidueSet::Empty => false,
            ResidueSet::Singleton(z) => *z == BigInt::from(d),
            ResidueSet::Residue { z, m } => d.rem_euclid(*m) == *z,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, ResidueSet::Empty)
    }
}

/// A partition, stored as its weakly decreasing positive row lengths.
/// The empty list is the empty partition.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Partition {
    rows: Vec<usize>,
}

impl Partition {
    pub fn new(rows: Vec<usize>) -> Result<Self> {
        let ok = rows.iter().all(|&r| r >= 1) && rows.windows(2).all(|w| w[0] >= w[1]);
        if ok {
            Ok(Partition { rows })
        } else {
            Err(Error::InvalidPartition(rows))
        }
    }

    pub fn empty() -> Self {
        Partition { rows: Vec::new() }
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Number of boxes.
    pub fn size(&self) -> usize {
        self.rows.iter().sum()
    }

    /// Number of rows.
    pub fn height(&self) -> usize {
        self.rows.len()
    }

    /// Length of the longest (bottom) row.
    pub fn width(&self) -> usize {
        self.rows.first().copied().unwrap_or(0)
    }

    /// Length of row `y` (1-based); 0 beyond the top row.
    pub fn row_len(&self, y: i64) -> usize {
        if y >= 1 && (y as usize) <= self.rows.len() {
            self.rows[y as usize - 1]
        } else {
            0
        }
    }

    pub fn contains(&self, c: Cell) -> bool {
        c.x >= 1 && c.y >= 1 && c.x as usize <= self.row_len(c.y)
    }

    /// Membership in the closure: the partition together with every point
    /// having a nonpositive coordinate.
    pub fn closure_contains(&self, x: i64, y: i64) -> bool {
        x <= 0 || y <= 0 || self.contains(Cell::new(x, y))
    }

    /// All boxes, bottom row first, left to right.
    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.rows.iter().enumerate().flat_map(|(i, &len)| {
            let y = (i + 1) as i64;
            (1..=len as i64).map(move |x| Cell::new(x, y))
        })
    }

    /// Containment of box sets: every box of `other` is a box of `self`.
    pub fn contains_partition(&self, other: &Partition) -> bool {
        other.rows.len() <= self.rows.len()
            && other.rows.iter().zip(&self.rows).all(|(o, s)| o <= s)
    }

    /// The boxes outside the partition whose diagonal lies in `s` and whose
    /// left and lower neighbors both lie in the closure. Any candidate has
    /// `x <= width + 1` and `y <= height + 1`, which keeps the scan finite:
    /// a box further out has a neighbor with positive coordinates outside
    /// the partition.
    pub fn loose_cells(&self, s: &ResidueSet) -> Vec<Cell> {
        if s.is_empty() {
            return Vec::new();
        }
        let mut out = Vec::new();
        for y in 1..=(self.height() as i64 + 1) {
            for x in 1..=(self.width() as i64 + 1) {
                let c = Cell::new(x, y);
                if !self.contains(c)
                    && s.contains(c.diag())
                    && self.closure_contains(x - 1, y)
                    && self.closure_contains(x, y - 1)
                {
                    out.push(c);
                }
            }
        }
        out
    }

    /// Upward displacement: the union of this partition with its loose
    /// boxes with respect to `s`.
    pub fn displace_up(&self, s: &ResidueSet) -> Partition {
        let loose = self.loose_cells(s);
        if loose.is_empty() {
            return self.clone();
        }
        let height = loose
            .iter()
            .map(|c| c.y as usize)
            .chain([self.height()])
            .max()
            .unwrap();
        let mut rows = Vec::with_capacity(height);
        for y in 1..=height as i64 {
            rows.push(self.row_len(y));
        }
        for c in &loose {
            // A loose box always sits at the end of its row.
            debug_assert_eq!(rows[c.y as usize - 1], c.x as usize - 1);
            rows[c.y as usize - 1] = c.x as usize;
        }
        Partition::new(rows).expect("displacement preserves the partition shape")
    }

    /// Hook length of a box: the boxes weakly to its right in the same row
    /// plus the boxes strictly above it in the same column.
    pub fn hook_length(&self, c: Cell) -> Result<usize> {
        if !self.contains(c) {
            return Err(Error::BoxOutside { x: c.x, y: c.y });
        }
        let arm = self.row_len(c.y) - c.x as usize + 1;
        let leg = self
            .rows
            .iter()
            .skip(c.y as usize)
            .take_while(|&&len| len >= c.x as usize)
            .count();
        Ok(arm + leg)
    }

    /// Number of standard Young tableaux on this shape, `|λ|! / Π hooks`.
    pub fn count_syt(&self) -> BigUint {
        let mut hooks = BigUint::one();
        for c in self.cells() {
            hooks *= BigUint::from(self.hook_length(c).unwrap());
        }
        let mut fact = BigUint::one();
        for k in 2..=self.size() {
            fact *= BigUint::from(k);
        }
        let (q, r) = fact.div_rem(&hooks);
        debug_assert!(r.is_zero(), "hook product divides the factorial");
        q
    }

    /// The transposed partition.
    pub fn dual(&self) -> Partition {
        let mut rows = Vec::with_capacity(self.width());
        for x in 1..=self.width() {
            rows.push(self.rows.iter().take_while(|&&len| len >= x).count());
        }
        Partition { rows }
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<usize>::deserialize(deserializer)?;
        Partition::new(rows).map_err(de::Error::custom)
    }
}

/// The partition whose row `r + 1 - i` has length `(g - d + r) + alpha[i]`,
/// with zero-length rows dropped. Equivalently, the minimal partition
/// containing the points `(g - d + r + alpha[i], r + 1 - i)` that lie in
/// the positive quadrant.
pub fn from_grda(g: i64, r: i64, d: i64, alpha: &[i64]) -> Result<Partition> {
    check_grda(g, r, d, alpha)?;
    let gdr = g - d + r;
    let mut rows: Vec<usize> = Vec::with_capacity(alpha.len());
    // alpha is nondecreasing, so filling rows bottom-up from the largest
    // alpha keeps the lengths weakly decreasing.
    for &a in alpha.iter().rev() {
        let len = gdr + a;
        if len > 0 {
            rows.push(len as usize);
        }
    }
    Partition::new(rows)
}

/// The adjusted Brill-Noether number `g - (r+1)(g-d+r) - Σ alpha[i]`.
pub fn rho(g: i64, r: i64, d: i64, alpha: &[i64]) -> Result<i64> {
    check_grda(g, r, d, alpha)?;
    Ok(g - (r + 1) * (g - d + r) - alpha.iter().sum::<i64>())
}

fn check_grda(g: i64, r: i64, d: i64, alpha: &[i64]) -> Result<()> {
    if g < 0 {
        return Err(Error::InvalidArgument(format!("genus {g} must be >= 0")));
    }
    if r < 0 {
        return Err(Error::InvalidArgument(format!("rank {r} must be >= 0")));
    }
    if g - d + r < 0 {
        return Err(Error::InvalidArgument(format!(
            "g - d + r = {} must be >= 0",
            g - d + r
        )));
    }
    if alpha.len() != (r + 1) as usize {
        return Err(Error::InvalidArgument(format!(
            "alpha must have length r + 1 = {}, got {}",
            r + 1,
            alpha.len()
        )));
    }
    if alpha.iter().any(|&a| a < 0) || alpha.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument(
            "alpha must be nondecreasing and nonnegative".into(),
        ));
    }
    Ok(())
}

/// All partitions with exactly `n` boxes, parts listed weakly decreasing,
/// in lexicographically decreasing order of the row vector.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(remaining: usize, max_part: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition {
                rows: current.clone(),
            });
            return;
        }
        for part in (1..=remaining.min(max_part)).rev() {
            current.push(part);
            rec(remaining - part, part, current, out);
            current.pop();
        }
    }
    if n == 0 {
        out.push(Partition::empty());
    } else {
        rec(n, n, &mut current, &mut out);
    }
    out
}

/// All partitions with at most `max_size` boxes (including the empty one).
pub fn partitions_up_to(max_size: usize) -> Vec<Partition> {
    (0..=max_size).flat_map(partitions_of).collect()
}

/// All rectangular partitions with at most `max_size` boxes, height first.
pub fn rectangles_up_to(max_size: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    for h in 1..=max_size {
        for w in 1..=max_size / h {
            out.push(Partition { rows: vec![w; h] });
        }
    }
    out
}
