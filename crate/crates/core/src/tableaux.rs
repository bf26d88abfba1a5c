//! Displacement tableaux: labelings of a partition by `{1..g}` that are
//! strictly increasing along rows and columns, where a label `i` may repeat
//! only on boxes whose diagonals agree modulo the torsion order `m_i`.
//!
//! Label 1 can never repeat (strict increase forces it into the corner),
//! so `m_1` is never consulted.

use std::collections::BTreeSet;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::chain::TorsionProfile;
use crate::error::{Error, Result};
use crate::partitions::{Cell, Partition, ResidueSet};

/// A labeling of the boxes of a partition by symbols from `1..=g`.
/// Rows are stored bottom-to-top, matching the shape's row order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DisplacementTableau {
    shape: Partition,
    rows: Vec<Vec<u32>>,
    alphabet: u32,
}

impl DisplacementTableau {
    /// Builds a tableau, checking that the labels cover exactly the boxes
    /// of the shape and lie in `1..=alphabet`. Validity against a torsion
    /// profile is a separate check (`validate`).
    pub fn new(shape: Partition, rows: Vec<Vec<u32>>, alphabet: u32) -> Result<Self> {
        if rows.len() != shape.height()
            || rows
                .iter()
                .zip(shape.rows())
                .any(|(labels, &len)| labels.len() != len)
        {
            return Err(Error::LabelShapeMismatch);
        }
        for (yi, labels) in rows.iter().enumerate() {
            for (xi, &l) in labels.iter().enumerate() {
                if l < 1 || l > alphabet {
                    return Err(Error::LabelOutOfRange {
                        label: l,
                        x: (xi + 1) as i64,
                        y: (yi + 1) as i64,
                        g: alphabet,
                    });
                }
            }
        }
        Ok(DisplacementTableau {
            shape,
            rows,
            alphabet,
        })
    }

    pub fn empty(alphabet: u32) -> Self {
        DisplacementTableau {
            shape: Partition::empty(),
            rows: Vec::new(),
            alphabet,
        }
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }

    pub fn label(&self, c: Cell) -> u32 {
        self.rows[c.y as usize - 1][c.x as usize - 1]
    }

    pub fn entries(&self) -> impl Iterator<Item = (Cell, u32)> + '_ {
        self.shape.cells().map(move |c| (c, self.label(c)))
    }

    pub fn distinct_labels(&self) -> BTreeSet<u32> {
        self.entries().map(|(_, l)| l).collect()
    }

    pub fn has_repeated_label(&self) -> bool {
        self.distinct_labels().len() < self.shape.size()
    }

    /// The tableau on the transposed shape with axes switched.
    pub fn dual(&self) -> DisplacementTableau {
        let shape = self.shape.dual();
        let rows = shape
            .rows()
            .iter()
            .enumerate()
            .map(|(yi, &len)| {
                (0..len)
                    .map(|xi| self.rows[xi][yi])
                    .collect::<Vec<u32>>()
            })
            .collect();
        DisplacementTableau {
            shape,
            rows,
            alphabet: self.alphabet,
        }
    }

    /// Checks both defining conditions against a torsion profile: strict
    /// increase along rows and columns, and for every repeated label `i`,
    /// `m_i > 0` dividing all pairwise diagonal differences.
    pub fn validate(&self, profile: &TorsionProfile) -> bool {
        if self.alphabet as usize != profile.genus() {
            return false;
        }
        for (c, l) in self.entries() {
            if c.x >= 2 && self.label(Cell::new(c.x - 1, c.y)) >= l {
                return false;
            }
            if c.y >= 2 && self.shape.contains(Cell::new(c.x, c.y - 1))
                && self.label(Cell::new(c.x, c.y - 1)) >= l
            {
                return false;
            }
        }
        let mut first_diag = vec![None::<i64>; self.alphabet as usize + 1];
        for (c, l) in self.entries() {
            match first_diag[l as usize] {
                None => first_diag[l as usize] = Some(c.diag()),
                Some(d0) => {
                    let m = profile.torsion(l as usize);
                    if m == 0 || (c.diag() - d0).rem_euclid(m) != 0 {
                        return false;
                    }
                }
            }
        }
        true
    }
}

impl Serialize for DisplacementTableau {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("DisplacementTableau", 2)?;
        st.serialize_field("shape", &self.shape)?;
        st.serialize_field("rows", &self.rows)?;
        st.end()
    }
}

/// Streams every displacement tableau on `shape` over the alphabet
/// `1..=profile.genus()`, each exactly once, in lexicographic order of the
/// label sequence read bottom row first, left to right. Backtracking fills
/// boxes in that same reading order; strict increase only needs the left
/// and lower neighbors, and repeats are pruned against the diagonal of the
/// label's first use.
pub fn enumerate(shape: &Partition, profile: &TorsionProfile) -> TableauIter {
    let cells: Vec<Cell> = shape.cells().collect();
    let n = cells.len();
    let mut below = vec![usize::MAX; n];
    let mut index = std::collections::HashMap::new();
    for (i, c) in cells.iter().enumerate() {
        index.insert((c.x, c.y), i);
    }
    for (i, c) in cells.iter().enumerate() {
        if let Some(&j) = index.get(&(c.x, c.y - 1)) {
            below[i] = j;
        }
    }
    let g = profile.genus() as u32;
    let torsion: Vec<i64> = (0..=profile.genus())
        .map(|i| if i == 0 { 0 } else { profile.torsion(i) })
        .collect();
    TableauIter {
        shape: shape.clone(),
        cells,
        below,
        g,
        torsion,
        labels: vec![0; n],
        use_count: vec![0; g as usize + 1],
        first_diag: vec![0; g as usize + 1],
        pos: 0,
        state: if n == 0 { IterState::EmptyPending } else { IterState::Running },
    }
}

enum IterState {
    EmptyPending,
    Running,
    Done,
}

pub struct TableauIter {
    shape: Partition,
    cells: Vec<Cell>,
    below: Vec<usize>,
    g: u32,
    torsion: Vec<i64>,
    labels: Vec<u32>,
    use_count: Vec<u32>,
    first_diag: Vec<i64>,
    pos: usize,
    state: IterState,
}

impl TableauIter {
    fn feasible(&self, pos: usize, label: u32) -> bool {
        let c = self.cells[pos];
        if c.x >= 2 && self.labels[pos - 1] >= label {
            return false;
        }
        let b = self.below[pos];
        if b != usize::MAX && self.labels[b] >= label {
            return false;
        }
        if self.use_count[label as usize] > 0 {
            let m = self.torsion[label as usize];
            if m == 0 || (c.diag() - self.first_diag[label as usize]).rem_euclid(m) != 0 {
                return false;
            }
        }
        true
    }

    fn build(&self) -> DisplacementTableau {
        let mut rows: Vec<Vec<u32>> = self
            .shape
            .rows()
            .iter()
            .map(|&len| Vec::with_capacity(len))
            .collect();
        for (i, c) in self.cells.iter().enumerate() {
            rows[c.y as usize - 1].push(self.labels[i]);
        }
        DisplacementTableau {
            shape: self.shape.clone(),
            rows,
            alphabet: self.g,
        }
    }
}

impl Iterator for TableauIter {
    type Item = DisplacementTableau;

    fn next(&mut self) -> Option<DisplacementTableau> {
        match self.state {
            IterState::Done => return None,
            IterState::EmptyPending => {
                self.state = IterState::Done;
                return Some(DisplacementTableau::empty(self.g));
            }
            IterState::Running => {}
        }
        let n = self.cells.len();
        // After yielding a complete labeling, resume by re-trying the last
        // box with the next label; labels[pos] keeps the previous attempt.
        if self.pos == n {
            self.pos = n - 1;
            let l = self.labels[self.pos] as usize;
            self.use_count[l] -= 1;
        }
        loop {
            let start = self.labels[self.pos] + 1;
            let mut chosen = 0;
            for l in start..=self.g {
                if self.feasible(self.pos, l) {
                    chosen = l;
                    break;
                }
            }
            if chosen > 0 {
                self.labels[self.pos] = chosen;
                let li = chosen as usize;
                if self.use_count[li] == 0 {
                    self.first_diag[li] = self.cells[self.pos].diag();
                }
                self.use_count[li] += 1;
                self.pos += 1;
                if self.pos == n {
                    return Some(self.build());
                }
            } else {
                self.labels[self.pos] = 0;
                if self.pos == 0 {
                    self.state = IterState::Done;
                    return None;
                }
                self.pos -= 1;
                let l = self.labels[self.pos] as usize;
                self.use_count[l] -= 1;
            }
        }
    }
}

/// The minimum number of distinct symbols over all displacement tableaux
/// on `shape`, or `None` when no tableau exists. The dimension of the
/// corresponding locus is `g` minus this value. Branch-and-bound over the
/// same search tree as `enumerate`, trying already-used labels first.
pub fn min_distinct_symbols(shape: &Partition, profile: &TorsionProfile) -> Option<usize> {
    let cells: Vec<Cell> = shape.cells().collect();
    let n = cells.len();
    let g = profile.genus();
    if n == 0 {
        return Some(0);
    }
    // Any monotone chain of boxes carries distinct labels, so the longest
    // chain bounds the answer from below.
    let chain_bound = shape
        .cells()
        .map(|c| (c.x + c.y - 1) as usize)
        .max()
        .unwrap_or(0);
    if chain_bound > g {
        return None;
    }

    struct Search {
        cells: Vec<Cell>,
        below: Vec<usize>,
        g: u32,
        torsion: Vec<i64>,
        labels: Vec<u32>,
        use_count: Vec<u32>,
        first_diag: Vec<i64>,
        best: usize,
        lower: usize,
    }

    impl Search {
        fn feasible(&self, pos: usize, label: u32) -> bool {
            let c = self.cells[pos];
            if c.x >= 2 && self.labels[pos - 1] >= label {
                return false;
            }
            let b = self.below[pos];
            if b != usize::MAX && self.labels[b] >= label {
                return false;
            }
            if self.use_count[label as usize] > 0 {
                let m = self.torsion[label as usize];
                if m == 0 || (c.diag() - self.first_diag[label as usize]).rem_euclid(m) != 0 {
                    return false;
                }
            }
            true
        }

        fn go(&mut self, pos: usize, distinct: usize) {
            if distinct >= self.best {
                return;
            }
            if pos == self.cells.len() {
                self.best = distinct;
                return;
            }
            // Reused labels first: they keep the distinct count low, which
            // tightens the bound early.
            for reuse in [true, false] {
                for l in 1..=self.g {
                    let used = self.use_count[l as usize] > 0;
                    if used != reuse || !self.feasible(pos, l) {
                        continue;
                    }
                    if self.use_count[l as usize] == 0 {
                        self.first_diag[l as usize] = self.cells[pos].diag();
                    }
                    self.use_count[l as usize] += 1;
                    self.labels[pos] = l;
                    self.go(pos + 1, if used { distinct } else { distinct + 1 });
                    self.use_count[l as usize] -= 1;
                    self.labels[pos] = 0;
                    if self.best == self.lower {
                        return;
                    }
                }
            }
        }
    }

    let mut below = vec![usize::MAX; n];
    let mut index = std::collections::HashMap::new();
    for (i, c) in cells.iter().enumerate() {
        index.insert((c.x, c.y), i);
    }
    for (i, c) in cells.iter().enumerate() {
        if let Some(&j) = index.get(&(c.x, c.y - 1)) {
            below[i] = j;
        }
    }
    let torsion: Vec<i64> = (0..=g)
        .map(|i| if i == 0 { 0 } else { profile.torsion(i) })
        .collect();
    let mut search = Search {
        cells,
        below,
        g: g as u32,
        torsion,
        labels: vec![0; n],
        use_count: vec![0; g + 1],
        first_diag: vec![0; g + 1],
        best: usize::MAX,
        lower: chain_bound,
    };
    search.go(0, 0);
    if search.best == usize::MAX {
        None
    } else {
        Some(search.best)
    }
}

/// Runs the assembly iteration of a tableau: starting from the empty
/// partition, displace upward by `sets[i-1]` at step `i`, returning all
/// `g + 1` intermediate partitions. Requires every box's diagonal to lie
/// in the set of its label; the final partition then contains the shape.
pub fn assemble(t: &DisplacementTableau, sets: &[ResidueSet]) -> Result<Vec<Partition>> {
    if sets.len() != t.alphabet() as usize {
        return Err(Error::ResidueSetCount {
            expected: t.alphabet() as usize,
            got: sets.len(),
        });
    }
    for (c, l) in t.entries() {
        if !sets[l as usize - 1].contains(c.diag()) {
            return Err(Error::DiagonalNotCovered {
                x: c.x,
                y: c.y,
                label: l,
                diag: c.diag(),
            });
        }
    }
    let mut out = Vec::with_capacity(sets.len() + 1);
    let mut current = Partition::empty();
    out.push(current.clone());
    for s in sets {
        current = current.displace_up(s);
        out.push(current.clone());
    }
    debug_assert!(out.last().unwrap().contains_partition(t.shape()));
    Ok(out)
}
