//! Acceptance suite. Each test pins one verification criterion, checks it
//! with exact arithmetic (zero tolerance), and prints a pass line with its
//! runtime. Run with `cargo test -p bnchain-core --test acceptance`.

use std::time::{Duration, Instant};

use num::bigint::BigUint;
use rand::Rng;

use bnchain_core::brill_noether::{
    components, expected_class, is_general_bruteforce, is_general_marked, is_general_unmarked,
};
use bnchain_core::chain::{ChainSpec, CyclePoint, TorsionProfile};
use bnchain_core::divisors::{
    self, canonical_divisor, divisor_from_xi, in_torus, in_w_lambda, standard_form,
};
use bnchain_core::oracle;
use bnchain_core::partitions::{partitions_of, partitions_up_to, Partition};
use bnchain_core::random::{
    random_divisor, random_partition, random_principal_twin, random_subpartition, rng_from_seed,
    verify_suite,
};
use bnchain_core::rat::Rat;
use bnchain_core::tableaux;

fn finish(name: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    println!("ACCEPTANCE {name}: PASS ({elapsed:.2?}, budget {budget:.0?})");
    assert!(
        elapsed < budget,
        "{name} exceeded its runtime budget: {elapsed:?} >= {budget:?}"
    );
}

fn abstract_chain(interior: &[i64]) -> ChainSpec {
    ChainSpec::abstract_chain(
        TorsionProfile::new(interior.len() + 1, None, interior.to_vec()).unwrap(),
    )
}

fn shape(rows: &[usize]) -> Partition {
    Partition::new(rows.to_vec()).unwrap()
}

/// Genus 4, no torsion: the locus of the 2x2 square is exactly two points,
/// with coordinates (0, 1, -1, 0) and (0, -1, 1, 0).
#[test]
fn criterion_1_generic_square_locus() {
    let started = Instant::now();
    let spec = abstract_chain(&[0, 0, 0]);
    let comps = components(&spec, &shape(&[2, 2]));
    assert_eq!(comps.len(), 2);
    for c in &comps {
        assert_eq!(c.dim, 0);
    }
    assert_eq!(comps[0].torus.fixed_xi(), vec![Some(0), Some(1), Some(-1), Some(0)]);
    assert_eq!(comps[1].torus.fixed_xi(), vec![Some(0), Some(-1), Some(1), Some(0)]);
    finish("1 generic square locus", started, Duration::from_secs(1));
}

/// Genus 4 with m_2 = 2: two extra one-dimensional components appear, with
/// the expected tableaux.
#[test]
fn criterion_2_torsion_two_square_locus() {
    let started = Instant::now();
    let spec = abstract_chain(&[2, 0, 0]);
    let comps = components(&spec, &shape(&[2, 2]));
    assert_eq!(comps.len(), 4);
    let zero_dim: Vec<_> = comps.iter().filter(|c| c.dim == 0).collect();
    let one_dim: Vec<_> = comps.iter().filter(|c| c.dim == 1).collect();
    assert_eq!(zero_dim.len(), 2);
    assert_eq!(one_dim.len(), 2);
    let mut one_dim_rows: Vec<_> = one_dim.iter().map(|c| c.tableau.rows().to_vec()).collect();
    one_dim_rows.sort();
    assert_eq!(
        one_dim_rows,
        vec![
            vec![vec![1, 2], vec![2, 3]],
            vec![vec![1, 2], vec![2, 4]],
        ]
    );
    finish("2 torsion-two square locus", started, Duration::from_secs(1));
}

/// For every genus in 2..=7 and every profile over {0, 2, 3}, the
/// two-row staircase shape (g-1, g-1) has a component exactly when
/// m_2 = ... = m_{g-1} = 2, and then a unique zero-dimensional one pinning
/// the class <0>_1 + sum_{i>=2} <i-3>_i - (g-2) w_g.
#[test]
fn criterion_3_hyperelliptic_characterization() {
    let started = Instant::now();
    for g in 2..=7usize {
        let entries = [0i64, 2, 3];
        let mut idx = vec![0usize; g - 1];
        loop {
            let interior: Vec<i64> = idx.iter().map(|&k| entries[k]).collect();
            let spec = abstract_chain(&interior);
            let profile = spec.torsion_profile();
            let comps = components(&spec, &shape(&[g - 1, g - 1]));
            let interior_all_two = (2..g).all(|i| profile.torsion(i) == 2);
            if interior_all_two {
                assert_eq!(comps.len(), 1, "g={g} interior={interior:?}");
                let c = &comps[0];
                assert_eq!(c.dim, 0);
                let xs = c.torus.fixed_xi();
                for i in 1..=g {
                    let expected = if i == 1 { 0 } else { i as i64 - 3 };
                    let got = spec.point(i, Rat::from_int(xs[i - 1].unwrap())).unwrap();
                    let want = spec.point(i, Rat::from_int(expected)).unwrap();
                    assert!(
                        spec.point_eq(&got, &want).unwrap(),
                        "g={g} interior={interior:?} cycle={i}"
                    );
                }
            } else {
                assert!(comps.is_empty(), "g={g} interior={interior:?}");
            }
            // Next profile in the lattice.
            let mut pos = 0;
            loop {
                if pos == idx.len() {
                    break;
                }
                idx[pos] += 1;
                if idx[pos] < entries.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == idx.len() {
                break;
            }
        }
    }
    finish("3 hyperelliptic characterization", started, Duration::from_secs(10));
}

/// The closed-form generality criteria agree with brute-force tableau
/// search (size bound 2g) over every profile with entries in {0, 2, .., g}
/// for g <= 6, in both the marked and unmarked senses.
#[test]
fn criterion_4_generality_closed_form_vs_brute_force() {
    let started = Instant::now();
    for g in 2..=6usize {
        let mut entries = vec![0i64];
        entries.extend(2..=g as i64);
        let mut idx = vec![0usize; g - 1];
        loop {
            let interior: Vec<i64> = idx.iter().map(|&k| entries[k]).collect();
            let profile = TorsionProfile::new(g, None, interior.clone()).unwrap();
            let (closed_unmarked, _) = is_general_unmarked(&profile);
            let (closed_marked, _) = is_general_marked(&profile);
            let (brute_unmarked, _) = is_general_bruteforce(&profile, false, 2 * g);
            let (brute_marked, _) = is_general_bruteforce(&profile, true, 2 * g);
            assert_eq!(closed_unmarked, brute_unmarked, "g={g} interior={interior:?}");
            assert_eq!(closed_marked, brute_marked, "g={g} interior={interior:?}");
            let mut pos = 0;
            loop {
                if pos == idx.len() {
                    break;
                }
                idx[pos] += 1;
                if idx[pos] < entries.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == idx.len() {
                break;
            }
        }
    }
    finish("4 generality criteria equivalence", started, Duration::from_secs(300));
}

/// Exhaustive torus decomposition: on every chain of genus <= 3 with all
/// torsion orders in {2, 3} (including the first cycle) the classes form a
/// finite lattice; for every partition with at most g + 2 boxes and every
/// lattice class, membership in the union of tori coincides with
/// containment of the shape in the Weierstrass partition.
#[test]
fn criterion_5_torus_decomposition_exhaustive() {
    let started = Instant::now();
    let mut checks = 0u64;
    for g in 1..=3usize {
        let orders = [2i64, 3];
        let mut idx = vec![0usize; g];
        loop {
            let m: Vec<i64> = idx.iter().map(|&k| orders[k]).collect();
            let profile = TorsionProfile::new(g, Some(m[0]), m[1..].to_vec()).unwrap();
            let spec = ChainSpec::abstract_chain(profile.clone());
            let shapes = partitions_up_to(g + 2);
            let comp_lists: Vec<_> = shapes.iter().map(|s| components(&spec, s)).collect();
            let mut lattice = vec![0i64; g];
            loop {
                let xi: Vec<Rat> = lattice.iter().map(|&z| Rat::from_int(z)).collect();
                let d = divisor_from_xi(&spec, &xi, 0).unwrap();
                for (s, comps) in shapes.iter().zip(&comp_lists) {
                    let member = in_w_lambda(&spec, &d, s).unwrap();
                    let in_union = comps
                        .iter()
                        .any(|c| in_torus(&spec, &d, &c.tableau).unwrap());
                    assert_eq!(
                        member, in_union,
                        "g={g} m={m:?} class={lattice:?} shape={s:?}"
                    );
                    checks += 1;
                }
                let mut pos = 0;
                loop {
                    if pos == g {
                        break;
                    }
                    lattice[pos] += 1;
                    if lattice[pos] < profile.torsion(pos + 1) {
                        break;
                    }
                    lattice[pos] = 0;
                    pos += 1;
                }
                if pos == g {
                    break;
                }
            }
            let mut pos = 0;
            loop {
                if pos == g {
                    break;
                }
                idx[pos] += 1;
                if idx[pos] < orders.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == g {
                break;
            }
        }
    }
    println!("  exhaustive equivalence checks: {checks}");
    finish("5 torus decomposition exhaustive", started, Duration::from_secs(300));
}

/// Rank cross-validation: 200 seeded random divisors per chain, on
/// unit-length chains (every torsion order 2) and on chains with torsion
/// g + 2 > g, for g in {2, 3, 4}, degrees -1 .. 2g - 2. The
/// partition-pipeline rank must equal the chip-firing rank in every trial.
#[test]
fn criterion_6_oracle_cross_validation() {
    let started = Instant::now();
    for g in 2..=4usize {
        for total in [2i64, g as i64 + 2] {
            let spec = ChainSpec::uniform_metric(g, total).unwrap();
            let max_degree = 2 * g as i64 - 2;
            let seed = 0xBC00 + (g as u64) * 16 + total as u64;
            let reports = verify_suite(&spec, 200, seed, max_degree, 1).unwrap();
            assert_eq!(reports.len(), 200);
            for r in &reports {
                assert!(
                    r.matched,
                    "g={g} total={total} divisor={} wp={} oracle={}",
                    serde_json::to_string(&r.divisor).unwrap(),
                    r.rank_wp,
                    r.rank_oracle
                );
            }
        }
    }
    finish("6 oracle cross-validation", started, Duration::from_secs(600));
}

/// Hook-length consistency: the hook formula counts standard tableaux
/// exactly, and on torsion-free chains (and high-torsion surrogates) the
/// number of components of a size-g shape equals that count.
#[test]
fn criterion_7_hook_length_consistency() {
    let started = Instant::now();
    for n in 0..=8usize {
        for s in partitions_of(n) {
            let g = n.max(1);
            let listed = tableaux::enumerate(&s, &TorsionProfile::generic(g)).count();
            assert_eq!(BigUint::from(listed), s.count_syt(), "shape {s:?}");
        }
    }
    for g in 1..=6usize {
        let generic = abstract_chain(&vec![0; g - 1]);
        let surrogate = abstract_chain(&vec![g as i64 + 2; g - 1]);
        for s in partitions_of(g) {
            let expected = expected_class(&s, g);
            assert_eq!(expected.expected_dim, 0);
            for spec in [&generic, &surrogate] {
                let comps = components(spec, &s);
                assert_eq!(
                    BigUint::from(comps.len()),
                    expected.syt_count,
                    "g={g} shape {s:?}"
                );
                assert!(comps.iter().all(|c| c.dim == 0));
            }
        }
    }
    finish("7 hook-length consistency", started, Duration::from_secs(60));
}

/// Randomized structural suites, at least 1000 cases each: displacement
/// monotonicity, standard-form invariance under principal moves,
/// coordinate antisymmetry under Serre duality, and the Riemann-Roch
/// identity inside the chip-firing oracle.
#[test]
fn criterion_8_structural_property_suites() {
    let started = Instant::now();
    let mut rng = rng_from_seed(0xACCE);

    // Displacement monotonicity.
    for _ in 0..1000 {
        let outer = random_partition(&mut rng, 12);
        let inner = random_subpartition(&mut rng, &outer);
        let s = match rng.gen_range(0..3) {
            0 => bnchain_core::ResidueSet::empty(),
            1 => bnchain_core::ResidueSet::singleton(rng.gen_range(-8..=8)),
            _ => {
                let m = rng.gen_range(1..=6);
                bnchain_core::ResidueSet::residue(rng.gen_range(-8..=8), m).unwrap()
            }
        };
        assert!(outer
            .displace_up(&s)
            .contains_partition(&inner.displace_up(&s)));
    }

    // Standard-form invariance under random principal moves.
    for _ in 0..1000 {
        let g = rng.gen_range(1..=5);
        let total = rng.gen_range(2..=7);
        let spec = ChainSpec::uniform_metric(g, total).unwrap();
        let degree = rng.gen_range(-3..=6);
        let d = random_divisor(&mut rng, &spec, degree, &[1, 2, 3]);
        let twin = random_principal_twin(&mut rng, &spec, &d);
        assert_eq!(
            standard_form(&spec, &d).unwrap(),
            standard_form(&spec, &twin).unwrap()
        );
    }

    // Serre duality negates coordinates.
    for _ in 0..1000 {
        let g = rng.gen_range(1..=5);
        let interior: Vec<i64> = (0..g - 1)
            .map(|_| *[0i64, 2, 3, 4].get(rng.gen_range(0..4)).unwrap())
            .collect();
        let spec = abstract_chain(&interior);
        let d = random_divisor(&mut rng, &spec, 0, &[1, 2, 3]);
        let sf = standard_form(&spec, &d).unwrap();
        let dual = divisors::serre_dual(&spec, &d).unwrap();
        let sf_dual = standard_form(&spec, &dual).unwrap();
        for i in 0..g {
            assert_eq!(sf_dual.xi[i], spec.canonical_xi(i + 1, &-&sf.xi[i]));
        }
    }

    // Riemann-Roch identity on the finite model.
    for _ in 0..1000 {
        let g = rng.gen_range(1..=3);
        let total = rng.gen_range(2..=4);
        let spec = ChainSpec::uniform_metric(g, total).unwrap();
        let degree = rng.gen_range(-2..=2 * g as i64);
        let d = random_divisor(&mut rng, &spec, degree, &[1, 2]);
        let (graph, chips) = oracle::to_finite_graph(&spec, &d).unwrap();
        let k = graph.canonical_chips();
        let mut k_minus_d = k.clone();
        for (v, c) in chips.0.iter().enumerate() {
            k_minus_d.0[v] -= c;
        }
        let lhs = graph.bn_rank(&chips) - graph.bn_rank(&k_minus_d);
        let rhs = chips.degree() - graph.genus() + 1;
        assert_eq!(lhs, rhs);
    }

    // The chain's canonical divisor realizes the canonical chip class.
    for g in 1..=4usize {
        let spec = ChainSpec::uniform_metric(g, 2).unwrap();
        let (graph, chips) = oracle::to_finite_graph(&spec, &canonical_divisor(&spec)).unwrap();
        let via_graph = graph.dhar_reduce(&graph.canonical_chips());
        assert_eq!(graph.dhar_reduce(&chips), via_graph);
    }

    finish("8 structural property suites", started, Duration::from_secs(120));
}

/// The point identifications used throughout: integer coordinates name the
/// same point exactly when they agree modulo the torsion order.
#[test]
fn point_identification_spot_checks() {
    let spec = ChainSpec::uniform_metric(2, 2).unwrap();
    let p1 = CyclePoint::new(2, Rat::from_int(1));
    let p_minus1 = CyclePoint::new(2, Rat::from_int(-1));
    assert!(spec.point_eq(&p1, &p_minus1).unwrap());
}
