//! The chain-of-cycles model: `g` circles joined in a path by bridges.
//! Cycle `i` carries two marked points, `v_i` and `w_i`, with `v_i != w_i`;
//! the bridge from `w_i` runs to `v_{i+1}`, and `w_g` is the marked point
//! of the whole chain.
//!
//! Points on cycle `i` are written in the coordinate `<xi>_i`, the point
//! `xi * len(v_i w_i)` clockwise from `w_i`; so `w_i = <0>_i` and
//! `v_i = <-1>_i`. A chain is either *metric* (explicit rational edge
//! lengths) or *abstract* (a torsion profile only). An abstract cycle with
//! torsion order `m > 0` behaves like the metric cycle with `cw = 1`,
//! `total = m`; an abstract cycle with `m = 0` stands in for a cycle whose
//! edge-length ratio is irrational, so rational coordinates are identified
//! only when equal, and a non-integer coordinate matches no integer one.

use num::bigint::BigInt;
use num::{Integer, One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::ResidueSet;
use crate::rat::Rat;

/// Torsion orders `(m_2, ..., m_g)` of a genus-`g` chain, each `0` or
/// `>= 2`, plus the (normally immaterial) first order `m_1` when known.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionProfile {
    genus: usize,
    m1: Option<i64>,
    interior: Vec<i64>,
}

impl TorsionProfile {
    pub fn new(genus: usize, m1: Option<i64>, interior: Vec<i64>) -> Result<Self> {
        if genus == 0 {
            return Err(Error::InvalidChain("genus must be at least 1".into()));
        }
        if interior.len() != genus - 1 {
            return Err(Error::InvalidChain(format!(
                "profile must list m_2..m_g ({} entries for genus {}), got {}",
                genus - 1,
                genus,
                interior.len()
            )));
        }
        for &m in interior.iter().chain(m1.iter()) {
            if m == 1 || m < 0 {
                return Err(Error::InvalidTorsion(m));
            }
        }
        Ok(TorsionProfile { genus, m1, interior })
    }

    /// The all-zero profile: no cycle has rational torsion.
    pub fn generic(genus: usize) -> Self {
        TorsionProfile::new(genus, None, vec![0; genus - 1]).unwrap()
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn m1(&self) -> Option<i64> {
        self.m1
    }

    /// Entries `m_2..m_g`.
    pub fn interior(&self) -> &[i64] {
        &self.interior
    }

    /// Torsion order of cycle `i` for `i` in `1..=g`. An unknown `m_1`
    /// reads as 0.
    pub fn torsion(&self, i: usize) -> i64 {
        assert!(i >= 1 && i <= self.genus, "cycle index {i} out of range");
        if i == 1 {
            self.m1.unwrap_or(0)
        } else {
            self.interior[i - 2]
        }
    }
}

/// Edge lengths of one cycle: the clockwise edge from `v_i` to `w_i`, and
/// the full circumference.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleGeom {
    pub cw: Rat,
    pub total: Rat,
}

/// A chain of cycles, given either by exact edge lengths or by a torsion
/// profile alone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChainSpec {
    Metric {
        cycles: Vec<CycleGeom>,
        /// Bridge lengths, accepted for input fidelity; no computation in
        /// this library depends on them (the oracle builds them as paths
        /// when present).
        bridges: Option<Vec<Rat>>,
    },
    Abstract { profile: TorsionProfile },
}

/// A point on one cycle of a chain, in the `<xi>_i` coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CyclePoint {
    pub cycle: usize,
    pub xi: Rat,
}

impl CyclePoint {
    pub fn new(cycle: usize, xi: Rat) -> Self {
        CyclePoint { cycle, xi }
    }
}

impl ChainSpec {
    pub fn metric(cycles: Vec<CycleGeom>, bridges: Option<Vec<Rat>>) -> Result<Self> {
        if cycles.is_empty() {
            return Err(Error::InvalidChain("a chain needs at least one cycle".into()));
        }
        for (i, c) in cycles.iter().enumerate() {
            if !c.cw.is_positive() || c.cw >= c.total {
                return Err(Error::InvalidChain(format!(
                    "cycle {}: need 0 < cw < total, got cw={} total={}",
                    i + 1,
                    c.cw,
                    c.total
                )));
            }
        }
        if let Some(b) = &bridges {
            if b.len() != cycles.len() - 1 {
                return Err(Error::InvalidChain(format!(
                    "expected {} bridge lengths, got {}",
                    cycles.len() - 1,
                    b.len()
                )));
            }
            if b.iter().any(|l| l.is_negative()) {
                return Err(Error::InvalidChain("bridge lengths must be >= 0".into()));
            }
        }
        Ok(ChainSpec::Metric { cycles, bridges })
    }

    /// A chain of unit cycles: every `cw = 1` and `total = len`, so every
    /// torsion order equals `len`.
    pub fn uniform_metric(genus: usize, total: i64) -> Result<Self> {
        let geom = CycleGeom {
            cw: Rat::one(),
            total: Rat::from_int(total),
        };
        ChainSpec::metric(vec![geom; genus], None)
    }

    pub fn abstract_chain(profile: TorsionProfile) -> Self {
        ChainSpec::Abstract { profile }
    }

    pub fn genus(&self) -> usize {
        match self {
            ChainSpec::Metric { cycles, .. } => cycles.len(),
            ChainSpec::Abstract { profile } => profile.genus(),
        }
    }

    pub fn is_metric(&self) -> bool {
        matches!(self, ChainSpec::Metric { .. })
    }

    fn check_cycle(&self, i: usize) -> Result<()> {
        if i >= 1 && i <= self.genus() {
            Ok(())
        } else {
            Err(Error::CycleOutOfRange(i, self.genus()))
        }
    }

    pub fn cycle_geom(&self, i: usize) -> Option<&CycleGeom> {
        match self {
            ChainSpec::Metric { cycles, .. } => Some(&cycles[i - 1]),
            ChainSpec::Abstract { .. } => None,
        }
    }

    /// The ratio `cw / total` of cycle `i` in lowest terms `(a, b)`, or
    /// `None` for an abstract cycle of torsion 0. Abstract cycles with
    /// torsion `m > 0` report `(1, m)`.
    fn cycle_ratio(&self, i: usize) -> Option<(BigInt, BigInt)> {
        match self {
            ChainSpec::Metric { cycles, .. } => {
                let c = &cycles[i - 1];
                let r = &c.cw * c.total.recip().expect("total is positive");
                Some((r.numer().clone(), r.denom().clone()))
            }
            ChainSpec::Abstract { profile } => {
                let m = profile.torsion(i);
                if m == 0 {
                    None
                } else {
                    Some((BigInt::one(), BigInt::from(m)))
                }
            }
        }
    }

    /// The period of the `<xi>_i` coordinate on cycle `i`: `total / cw`,
    /// i.e. `b / a` for the ratio above. `None` when the coordinate has no
    /// rational period.
    pub fn cycle_span(&self, i: usize) -> Option<Rat> {
        let (a, b) = self.cycle_ratio(i)?;
        Some(Rat::from_bigint(b) * Rat::from_bigint(a).recip().unwrap())
    }

    /// Torsion orders of every cycle, computed from edge lengths in metric
    /// mode: `m_i` is the denominator of `cw_i / total_i` in lowest terms.
    pub fn torsion_profile(&self) -> TorsionProfile {
        match self {
            ChainSpec::Metric { cycles, .. } => {
                let g = cycles.len();
                let order = |i: usize| -> i64 {
                    let (_, b) = self.cycle_ratio(i).unwrap();
                    i64::try_from(b).expect("torsion order fits in i64")
                };
                let m1 = Some(order(1));
                let interior = (2..=g).map(order).collect();
                TorsionProfile::new(g, m1, interior).expect("0 < cw < total forces m >= 2")
            }
            ChainSpec::Abstract { profile } => profile.clone(),
        }
    }

    /// Reduces a coordinate on cycle `i` into its canonical range:
    /// `[0, total/cw)` when the cycle has a rational period, unchanged
    /// otherwise.
    pub fn canonical_xi(&self, i: usize, xi: &Rat) -> Rat {
        match self.cycle_span(i) {
            Some(span) => xi.rem_euclid(&span),
            None => xi.clone(),
        }
    }

    /// The point `<xi>_i`, with its coordinate canonicalized.
    pub fn point(&self, i: usize, xi: Rat) -> Result<CyclePoint> {
        self.check_cycle(i)?;
        Ok(CyclePoint::new(i, self.canonical_xi(i, &xi)))
    }

    /// The marked point `w_g = <0>_g`.
    pub fn marked_point(&self) -> CyclePoint {
        CyclePoint::new(self.genus(), Rat::zero())
    }

    /// Whether two coordinates name the same point of the same cycle:
    /// their difference times `cw/total` must be an integer (equality on
    /// torsion-free abstract cycles).
    pub fn point_eq(&self, p: &CyclePoint, q: &CyclePoint) -> Result<bool> {
        if p.cycle != q.cycle {
            return Err(Error::CycleMismatch(p.cycle, q.cycle));
        }
        self.check_cycle(p.cycle)?;
        Ok(self.xi_eq(p.cycle, &p.xi, &q.xi))
    }

    pub(crate) fn xi_eq(&self, i: usize, a: &Rat, b: &Rat) -> bool {
        match self.cycle_ratio(i) {
            Some((num, den)) => {
                let diff = a - b;
                (diff * Rat::from_bigint(num) * Rat::from_bigint(den).recip().unwrap())
                    .is_integer()
            }
            None => a == b,
        }
    }

    /// All integers `z` with `<z>_i` equal to the given point: empty, a
    /// single integer (torsion 0), or a congruence class modulo the cycle's
    /// torsion order.
    pub fn integer_residues(&self, p: &CyclePoint) -> Result<ResidueSet> {
        self.check_cycle(p.cycle)?;
        match self.cycle_ratio(p.cycle) {
            None => Ok(match p.xi.to_bigint() {
                Some(z) => ResidueSet::singleton(z),
                None => ResidueSet::empty(),
            }),
            Some((a, b)) => {
                // <z> = <xi> iff xi - z is an integer multiple of b/a; with
                // xi = u/v in lowest terms this has integer solutions z iff
                // v divides a, and then z = xi - k*(b/a) where
                // k = (u*a/v) * b^{-1} mod a. The solutions form a full
                // congruence class modulo b.
                let u = p.xi.numer().clone();
                let v = p.xi.denom().clone();
                if !(&a % &v).is_zero() {
                    return Ok(ResidueSet::empty());
                }
                let av = &a / &v;
                let k = (&u * &av * mod_inverse(&b, &a)).mod_floor(&a);
                let z0 = (&p.xi - Rat::from_bigint(k) * Rat::from_bigint(b.clone())
                    * Rat::from_bigint(a).recip().unwrap())
                .to_bigint()
                .expect("constructed to be an integer");
                let m = i64::try_from(&b).expect("torsion order fits in i64");
                let z = i64::try_from(z0.mod_floor(&b)).expect("residue fits in i64");
                Ok(ResidueSet::residue(z, m).expect("m >= 2"))
            }
        }
    }
}

/// Inverse of `b` modulo `a > 0`; requires `gcd(a, b) = 1`.
fn mod_inverse(b: &BigInt, a: &BigInt) -> BigInt {
    let e = b.mod_floor(a).extended_gcd(a);
    debug_assert!(e.gcd.is_one() || a.is_one());
    e.x.mod_floor(a)
}

// Wire format. A metric chain is `{"cycles":[{"cw":"1/2","total":"3/2"}],
// "bridges":["1"]?}`; an abstract chain is
// `{"genus":4,"profile":[0,2,0],"m1":0?}`.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ChainSpecRepr {
    Metric {
        cycles: Vec<CycleGeom>,
        #[serde(skip_serializing_if = "Option::is_none")]
        bridges: Option<Vec<Rat>>,
    },
    Abstract {
        genus: usize,
        profile: Vec<i64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        m1: Option<i64>,
    },
}

impl Serialize for ChainSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self {
            ChainSpec::Metric { cycles, bridges } => ChainSpecRepr::Metric {
                cycles: cycles.clone(),
                bridges: bridges.clone(),
            },
            ChainSpec::Abstract { profile } => ChainSpecRepr::Abstract {
                genus: profile.genus(),
                profile: profile.interior().to_vec(),
                m1: profile.m1(),
            },
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ChainSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match ChainSpecRepr::deserialize(d)? {
            ChainSpecRepr::Metric { cycles, bridges } => {
                ChainSpec::metric(cycles, bridges).map_err(D::Error::custom)
            }
            ChainSpecRepr::Abstract { genus, profile, m1 } => {
                let p = TorsionProfile::new(genus, m1, profile).map_err(D::Error::custom)?;
                Ok(ChainSpec::abstract_chain(p))
            }
        }
    }
}
