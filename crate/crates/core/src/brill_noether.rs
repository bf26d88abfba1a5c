//! The locus-level view: for a chain and a partition, the locus of
//! degree-0 classes whose Weierstrass partition contains the shape is a
//! finite union of coordinate tori, one per displacement tableau. This
//! module enumerates those components, computes the locus dimension, and
//! decides Brill-Noether generality both in closed form and by brute
//! force, together with the expected intersection-class data read off
//! hook lengths.

use num::bigint::BigUint;
use num::One;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::chain::{ChainSpec, CyclePoint, TorsionProfile};
use crate::divisors::{divisor_from_xi, ChainDivisor};
use crate::error::Result;
use crate::partitions::{self, Partition, ResidueSet};
use crate::rat::Rat;
use crate::tableaux::{self, DisplacementTableau};

/// What a torus does to one cycle's coordinate: pins it to the point of an
/// integer (all integers matching it form the stored residue set), or
/// leaves it free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CycleConstraint {
    Free,
    Fixed(ResidueSet),
}

/// One torus of classes, described cycle by cycle. Its dimension is the
/// number of free cycles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusDescriptor {
    constraints: Vec<CycleConstraint>,
}

impl TorusDescriptor {
    pub fn constraints(&self) -> &[CycleConstraint] {
        &self.constraints
    }

    pub fn dim(&self) -> usize {
        self.constraints
            .iter()
            .filter(|c| matches!(c, CycleConstraint::Free))
            .count()
    }

    /// A representative coordinate for each fixed cycle (`None` on free
    /// cycles).
    pub fn fixed_xi(&self) -> Vec<Option<i64>> {
        self.constraints
            .iter()
            .map(|c| match c {
                CycleConstraint::Free => None,
                CycleConstraint::Fixed(ResidueSet::Residue { z, .. }) => Some(*z),
                CycleConstraint::Fixed(ResidueSet::Singleton(z)) => {
                    Some(i64::try_from(z).expect("fixed coordinate fits in i64"))
                }
                CycleConstraint::Fixed(ResidueSet::Empty) => unreachable!("fixed sets are nonempty"),
            })
            .collect()
    }

    /// A degree-0 divisor in this torus, with free coordinates supplied in
    /// order by `free`.
    pub fn sample(&self, spec: &ChainSpec, free: &[Rat]) -> Result<ChainDivisor> {
        let mut it = free.iter();
        let xi: Vec<Rat> = self
            .fixed_xi()
            .iter()
            .map(|f| match f {
                Some(z) => Rat::from_int(*z),
                None => it.next().cloned().unwrap_or_else(Rat::zero),
            })
            .collect();
        divisor_from_xi(spec, &xi, 0)
    }

    /// Whether every class of `self` lies in `other`: `other` must fix a
    /// subset of the cycles `self` fixes, to the same points.
    pub fn subtorus_of(&self, other: &TorusDescriptor, spec: &ChainSpec) -> bool {
        self.constraints
            .iter()
            .zip(&other.constraints)
            .enumerate()
            .all(|(idx, (mine, theirs))| match (mine, theirs) {
                (_, CycleConstraint::Free) => true,
                (CycleConstraint::Free, CycleConstraint::Fixed(_)) => false,
                (CycleConstraint::Fixed(a), CycleConstraint::Fixed(b)) => {
                    let i = idx + 1;
                    let pa = point_of(spec, i, a);
                    let pb = point_of(spec, i, b);
                    spec.point_eq(&pa, &pb).unwrap()
                }
            })
    }
}

fn point_of(spec: &ChainSpec, cycle: usize, s: &ResidueSet) -> CyclePoint {
    let xi = match s {
        ResidueSet::Residue { z, .. } => Rat::from_int(*z),
        ResidueSet::Singleton(z) => Rat::from_bigint(z.clone()),
        ResidueSet::Empty => unreachable!("fixed sets are nonempty"),
    };
    spec.point(cycle, xi).unwrap()
}

impl Serialize for TorusDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct FixedRepr {
            z: i64,
            #[serde(rename = "mod")]
            modulus: i64,
        }
        struct FixedMap<'a>(&'a TorusDescriptor);
        impl Serialize for FixedMap<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let fixed: Vec<(usize, FixedRepr)> = self
                    .0
                    .constraints
                    .iter()
                    .enumerate()
                    .filter_map(|(i, c)| match c {
                        CycleConstraint::Free => None,
                        CycleConstraint::Fixed(ResidueSet::Residue { z, m }) => {
                            Some((i + 1, FixedRepr { z: *z, modulus: *m }))
                        }
                        CycleConstraint::Fixed(ResidueSet::Singleton(z)) => Some((
                            i + 1,
                            FixedRepr {
                                z: i64::try_from(z).expect("fixed coordinate fits in i64"),
                                modulus: 0,
                            },
                        )),
                        CycleConstraint::Fixed(ResidueSet::Empty) => {
                            unreachable!("fixed sets are nonempty")
                        }
                    })
                    .collect();
                let mut map = s.serialize_map(Some(fixed.len()))?;
                for (i, r) in fixed {
                    map.serialize_entry(&i.to_string(), &r)?;
                }
                map.end()
            }
        }
        let free: Vec<usize> = self
            .constraints
            .iter()
            .enumerate()
            .filter_map(|(i, c)| matches!(c, CycleConstraint::Free).then_some(i + 1))
            .collect();
        let mut st = s.serialize_struct("TorusDescriptor", 2)?;
        st.serialize_field("fixed", &FixedMap(self))?;
        st.serialize_field("free", &free)?;
        st.end()
    }
}

/// One irreducible piece of a locus: the tableau, its torus, the torus
/// dimension, and whether the tableau repeats no symbol (the part of the
/// locus that persists for every torsion profile).
#[derive(Debug, Clone, Serialize)]
pub struct Component {
    pub tableau: DisplacementTableau,
    pub torus: TorusDescriptor,
    pub dim: usize,
    pub stable: bool,
}

/// All components of the locus of `shape` on the chain, one per
/// displacement tableau, in enumeration order. An empty list means the
/// locus is empty.
pub fn components(spec: &ChainSpec, shape: &Partition) -> Vec<Component> {
    let profile = spec.torsion_profile();
    let g = profile.genus();
    tableaux::enumerate(shape, &profile)
        .map(|t| {
            let mut constraints = vec![CycleConstraint::Free; g];
            for (c, l) in t.entries() {
                let i = l as usize;
                if matches!(constraints[i - 1], CycleConstraint::Free) {
                    let m = profile.torsion(i);
                    let set = if m == 0 {
                        ResidueSet::singleton(c.diag())
                    } else {
                        ResidueSet::residue(c.diag(), m).unwrap()
                    };
                    constraints[i - 1] = CycleConstraint::Fixed(set);
                }
            }
            let torus = TorusDescriptor { constraints };
            let dim = torus.dim();
            let stable = !t.has_repeated_label();
            Component { tableau: t, torus, dim, stable }
        })
        .collect()
}

/// Drops components whose torus is contained in another listed torus.
/// Ties (equal tori from different tableaux) keep the earliest.
pub fn maximal_components(spec: &ChainSpec, comps: Vec<Component>) -> Vec<Component> {
    let mut keep = vec![true; comps.len()];
    for i in 0..comps.len() {
        if !keep[i] {
            continue;
        }
        for j in 0..comps.len() {
            if i == j || !keep[j] {
                continue;
            }
            if comps[i].torus.subtorus_of(&comps[j].torus, spec)
                && (!comps[j].torus.subtorus_of(&comps[i].torus, spec) || j < i)
            {
                keep[i] = false;
                break;
            }
        }
    }
    comps
        .into_iter()
        .zip(keep)
        .filter_map(|(c, k)| k.then_some(c))
        .collect()
}

/// Dimension of the locus of `shape`: the genus minus the minimum number
/// of distinct symbols over the shape's tableaux; `None` when the locus is
/// empty.
pub fn dimension(spec: &ChainSpec, shape: &Partition) -> Option<usize> {
    let profile = spec.torsion_profile();
    tableaux::min_distinct_symbols(shape, &profile).map(|d| profile.genus() - d)
}

/// A certificate that a profile fails a generality criterion: a tableau
/// with a repeated symbol on the named cycle.
#[derive(Debug, Clone, Serialize)]
pub struct GeneralityWitness {
    pub cycle: usize,
    pub bound: i64,
    pub tableau: DisplacementTableau,
}

fn witness_tableau_rows(m: i64, i: i64, two_rows: bool) -> Vec<Vec<u32>> {
    let bottom: Vec<u32> = (1..=m).map(|x| (x - m + i) as u32).collect();
    let top: Vec<u32> = if two_rows {
        (1..=m).map(|x| (x + i - 1) as u32).collect()
    } else {
        vec![i as u32]
    };
    vec![bottom, top]
}

/// Generality without a marked point: every cycle `i` in `2..g` must have
/// `m_i = 0` or `m_i > min(i, g + 1 - i)`. On failure, the witness is the
/// `m_i x 2` rectangle labeled `x - m_i + i` on the bottom row and
/// `x + i - 1` on the top, which repeats the symbol `i`.
pub fn is_general_unmarked(profile: &TorsionProfile) -> (bool, Option<GeneralityWitness>) {
    let g = profile.genus() as i64;
    for i in 2..g {
        let m = profile.torsion(i as usize);
        let bound = i.min(g + 1 - i);
        if m != 0 && m <= bound {
            let shape = Partition::new(vec![m as usize; 2]).unwrap();
            let t = DisplacementTableau::new(shape, witness_tableau_rows(m, i, true), g as u32)
                .expect("witness labels stay inside the alphabet");
            debug_assert!(t.validate(profile));
            return (
                false,
                Some(GeneralityWitness { cycle: i as usize, bound, tableau: t }),
            );
        }
    }
    (true, None)
}

/// Generality with the marked point: every cycle `i` in `2..=g` must have
/// `m_i = 0` or `m_i > i`. The witness shrinks to the hook `(m_i, 1)` with
/// the same labeling restricted.
pub fn is_general_marked(profile: &TorsionProfile) -> (bool, Option<GeneralityWitness>) {
    let g = profile.genus() as i64;
    for i in 2..=g {
        let m = profile.torsion(i as usize);
        if m != 0 && m <= i {
            let shape = Partition::new(vec![m as usize, 1]).unwrap();
            let t = DisplacementTableau::new(shape, witness_tableau_rows(m, i, false), g as u32)
                .expect("witness labels stay inside the alphabet");
            debug_assert!(t.validate(profile));
            return (
                false,
                Some(GeneralityWitness { cycle: i as usize, bound: i, tableau: t }),
            );
        }
    }
    (true, None)
}

/// Decides generality by searching for a tableau with a repeated symbol:
/// over rectangles only (unmarked) or all partitions (marked), up to
/// `size_bound` boxes. A bound of `2g` is complete, because a failing
/// profile admits a witness on a rectangle of width `m_i <= g`.
pub fn is_general_bruteforce(
    profile: &TorsionProfile,
    marked: bool,
    size_bound: usize,
) -> (bool, Option<(Partition, DisplacementTableau)>) {
    let shapes = if marked {
        partitions::partitions_up_to(size_bound)
    } else {
        partitions::rectangles_up_to(size_bound)
    };
    for shape in shapes {
        if shape.size() < 2 {
            continue;
        }
        for t in tableaux::enumerate(&shape, profile) {
            if t.has_repeated_label() {
                return (false, Some((shape, t)));
            }
        }
    }
    (true, None)
}

/// Numerology of the expected locus: theta power `|λ|`, rational
/// coefficient `1 / Π hooks`, expected dimension `g - |λ|`, and the number
/// of standard tableaux `|λ|! / Π hooks` (the cardinality of the locus
/// when it is a finite set on a general chain).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpectedClass {
    pub theta_power: usize,
    pub coefficient: Rat,
    pub expected_dim: i64,
    pub syt_count: BigUint,
}

pub fn expected_class(shape: &Partition, g: usize) -> ExpectedClass {
    let mut hooks = BigUint::one();
    for c in shape.cells() {
        hooks *= BigUint::from(shape.hook_length(c).unwrap());
    }
    let coefficient = Rat::from_bigint(hooks.into())
        .recip()
        .expect("hook product is positive");
    ExpectedClass {
        theta_power: shape.size(),
        coefficient,
        expected_dim: g as i64 - shape.size() as i64,
        syt_count: shape.count_syt(),
    }
}

impl Serialize for ExpectedClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ExpectedClass", 4)?;
        st.serialize_field("theta_power", &self.theta_power)?;
        st.serialize_field("coefficient", &self.coefficient)?;
        st.serialize_field("expected_dim", &self.expected_dim)?;
        match u64::try_from(&self.syt_count) {
            Ok(n) => st.serialize_field("syt_count", &n)?,
            Err(_) => st.serialize_field("syt_count", &self.syt_count.to_string())?,
        }
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisors;

    fn abstract_chain(interior: &[i64]) -> ChainSpec {
        ChainSpec::abstract_chain(
            TorsionProfile::new(interior.len() + 1, None, interior.to_vec()).unwrap(),
        )
    }

    fn shape(rows: &[usize]) -> Partition {
        Partition::new(rows.to_vec()).unwrap()
    }

    fn profile(interior: &[i64]) -> TorsionProfile {
        TorsionProfile::new(interior.len() + 1, None, interior.to_vec()).unwrap()
    }

    #[test]
    fn generic_square_locus_is_two_points() {
        let spec = abstract_chain(&[0, 0, 0]);
        let comps = components(&spec, &shape(&[2, 2]));
        assert_eq!(comps.len(), 2);
        for c in &comps {
            assert_eq!(c.dim, 0);
            assert!(c.stable);
        }
        assert_eq!(
            comps[0].torus.fixed_xi(),
            vec![Some(0), Some(1), Some(-1), Some(0)]
        );
        assert_eq!(
            comps[1].torus.fixed_xi(),
            vec![Some(0), Some(-1), Some(1), Some(0)]
        );
        assert_eq!(dimension(&spec, &shape(&[2, 2])), Some(0));
    }

    #[test]
    fn torsion_two_adds_two_curves() {
        let spec = abstract_chain(&[2, 0, 0]);
        let comps = components(&spec, &shape(&[2, 2]));
        assert_eq!(comps.len(), 4);
        let dims: Vec<usize> = comps.iter().map(|c| c.dim).collect();
        assert_eq!(dims.iter().filter(|&&d| d == 0).count(), 2);
        assert_eq!(dims.iter().filter(|&&d| d == 1).count(), 2);
        assert_eq!(dimension(&spec, &shape(&[2, 2])), Some(1));
        // The one-dimensional components leave cycle 4 resp. cycle 3 free.
        let free: Vec<Vec<usize>> = comps
            .iter()
            .filter(|c| c.dim == 1)
            .map(|c| {
                c.torus
                    .constraints()
                    .iter()
                    .enumerate()
                    .filter_map(|(i, k)| matches!(k, CycleConstraint::Free).then_some(i + 1))
                    .collect()
            })
            .collect();
        assert_eq!(free, vec![vec![4], vec![3]]);
    }

    #[test]
    fn hyperelliptic_component() {
        // Genus 3 with m_2 = 2: the 2x2 square has the unique staircase
        // labeling, pinning the class (0, -1, 0) = (0, 1, 0) canonically.
        let spec = abstract_chain(&[2, 0]);
        let comps = components(&spec, &shape(&[2, 2]));
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].dim, 0);
        assert_eq!(comps[0].torus.fixed_xi(), vec![Some(0), Some(1), Some(0)]);
        assert!(!comps[0].stable);
    }

    #[test]
    fn empty_locus() {
        let spec = abstract_chain(&[0, 0]);
        assert!(components(&spec, &shape(&[2, 2])).is_empty());
        assert_eq!(dimension(&spec, &shape(&[2, 2])), None);
    }

    #[test]
    fn every_component_lies_in_the_locus() {
        let spec = abstract_chain(&[2, 3, 0]);
        for shp in [shape(&[2, 2]), shape(&[3, 1]), shape(&[1, 1, 1]), shape(&[4])] {
            for comp in components(&spec, &shp) {
                let d = comp.torus.sample(&spec, &[Rat::new(7, 3).unwrap()]).unwrap();
                assert!(divisors::in_w_lambda(&spec, &d, &shp).unwrap());
                assert!(divisors::in_torus(&spec, &d, &comp.tableau).unwrap());
            }
        }
    }

    #[test]
    fn closed_form_generality() {
        let (ok, _) = is_general_unmarked(&profile(&[0, 0, 0]));
        assert!(ok);
        let (ok, w) = is_general_unmarked(&profile(&[2, 0, 0]));
        assert!(!ok);
        let w = w.unwrap();
        assert_eq!(w.cycle, 2);
        assert_eq!(w.tableau.rows(), &[vec![1, 2], vec![2, 3]]);

        // m_g is invisible without the marked point, decisive with it.
        let (ok, _) = is_general_unmarked(&profile(&[0, 0, 0, 2]));
        assert!(ok);
        let (ok, w) = is_general_marked(&profile(&[0, 0, 0, 2]));
        assert!(!ok);
        assert_eq!(w.unwrap().cycle, 5);

        let (ok, w) = is_general_marked(&profile(&[0, 3, 0]));
        assert!(!ok);
        let w = w.unwrap();
        assert_eq!(w.cycle, 3);
        assert_eq!(w.tableau.shape(), &shape(&[3, 1]));
        let (ok, _) = is_general_unmarked(&profile(&[0, 3, 0]));
        assert!(ok);

        let (ok, _) = is_general_marked(&profile(&[0, 0, 0]));
        assert!(ok);
    }

    #[test]
    fn brute_force_agrees_on_small_profiles() {
        let g = 4usize;
        for m2 in [0i64, 2, 3] {
            for m3 in [0i64, 2, 3] {
                for m4 in [0i64, 2, 3] {
                    let p = profile(&[m2, m3, m4]);
                    for marked in [false, true] {
                        let closed = if marked {
                            is_general_marked(&p).0
                        } else {
                            is_general_unmarked(&p).0
                        };
                        let (brute, _) = is_general_bruteforce(&p, marked, 2 * g);
                        assert_eq!(closed, brute, "profile ({m2},{m3},{m4}) marked={marked}");
                    }
                }
            }
        }
    }

    #[test]
    fn genus_two_has_no_interior_condition() {
        let p = profile(&[2]);
        assert!(is_general_unmarked(&p).0);
        assert!(is_general_bruteforce(&p, false, 4).0);
        assert!(!is_general_marked(&p).0);
    }

    #[test]
    fn expected_class_examples() {
        let e = expected_class(&shape(&[2, 2]), 4);
        assert_eq!(e.theta_power, 4);
        assert_eq!(e.coefficient, Rat::new(1, 12).unwrap());
        assert_eq!(e.expected_dim, 0);
        assert_eq!(e.syt_count, BigUint::from(2u32));

        let theta = expected_class(&shape(&[1]), 7);
        assert_eq!(theta.coefficient, Rat::one());
        assert_eq!(theta.expected_dim, 6);

        let e = expected_class(&shape(&[3, 1]), 4);
        assert_eq!(e.syt_count, BigUint::from(3u32));
        assert_eq!(e.expected_dim, 0);
        assert_eq!(e.coefficient, Rat::new(1, 8).unwrap());
    }

    #[test]
    fn maximal_filter_drops_contained_tori() {
        // With m_2 = m_3 = 2 the square's zero-dimensional tori sit inside
        // the one-dimensional ones.
        let spec = abstract_chain(&[2, 2, 0]);
        let comps = components(&spec, &shape(&[2, 2]));
        let maximal = maximal_components(&spec, comps.clone());
        assert!(maximal.len() <= comps.len());
        for m in &maximal {
            assert!(m.dim >= 1 || comps.iter().all(|c| c.dim == 0));
        }
        // Everything dropped is contained in something kept.
        for c in &comps {
            assert!(maximal.iter().any(|m| c.torus.subtorus_of(&m.torus, &spec)));
        }
    }

    #[test]
    fn component_json_shape() {
        let spec = abstract_chain(&[2, 0, 0]);
        let comps = components(&spec, &shape(&[2, 2]));
        let js = serde_json::to_value(&comps[0]).unwrap();
        assert_eq!(js["dim"], serde_json::json!(1));
        assert_eq!(js["torus"]["fixed"]["2"]["mod"], serde_json::json!(2));
        assert_eq!(js["torus"]["free"], serde_json::json!([4]));
    }
}
