//! Seeded random generation of divisors, partitions, and equivalence
//! moves, plus the deterministic cross-validation suite comparing the
//! partition pipeline against the chip-firing oracle. Every trial is keyed
//! by `(master seed, trial index)`, so suites are reproducible and safe to
//! fan out across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chain::{ChainSpec, CyclePoint};
use crate::divisors::{ChainDivisor, Location};
use crate::error::Result;
use crate::oracle::{self, CrossCheckReport};
use crate::partitions::Partition;
use crate::rat::Rat;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(index))
}

/// A uniform-ish random partition with at most `max_size` boxes (possibly
/// empty), built by sampling weakly decreasing rows.
pub fn random_partition<R: Rng>(rng: &mut R, max_size: usize) -> Partition {
    let target = rng.gen_range(0..=max_size);
    let mut rows: Vec<usize> = Vec::new();
    let mut remaining = target;
    let mut cap = target.max(1);
    while remaining > 0 {
        let next = rng.gen_range(1..=remaining.min(cap));
        rows.push(next);
        cap = next;
        remaining -= next;
    }
    Partition::new(rows).unwrap()
}

/// A random partition contained in `outer`.
pub fn random_subpartition<R: Rng>(rng: &mut R, outer: &Partition) -> Partition {
    let mut rows = Vec::new();
    let mut cap = usize::MAX;
    for &len in outer.rows() {
        let pick = rng.gen_range(0..=len.min(cap));
        if pick == 0 {
            break;
        }
        rows.push(pick);
        cap = pick;
    }
    Partition::new(rows).unwrap()
}

/// A random rational with denominator drawn from `denoms` and numerator in
/// `[-span, span]`.
pub fn random_rat<R: Rng>(rng: &mut R, span: i64, denoms: &[i64]) -> Rat {
    let den = denoms[rng.gen_range(0..denoms.len())];
    let num = rng.gen_range(-span..=span);
    Rat::new(num, den).unwrap()
}

/// A random divisor of the given degree: a handful of chips at random
/// cycle or bridge locations, balanced by the marked-point coefficient.
pub fn random_divisor<R: Rng>(
    rng: &mut R,
    spec: &ChainSpec,
    degree: i64,
    denoms: &[i64],
) -> ChainDivisor {
    let g = spec.genus();
    let chips = rng.gen_range(1..=g + 2);
    let mut d = ChainDivisor::zero();
    for _ in 0..chips {
        let mult = *[1, 1, 1, 2, -1].iter().nth(rng.gen_range(0..5)).unwrap();
        if g >= 2 && rng.gen_ratio(1, 8) {
            d.push(Location::Bridge(rng.gen_range(1..g)), mult);
        } else {
            let cycle = rng.gen_range(1..=g);
            let xi = random_rat(rng, 2 * g as i64, denoms);
            d.push(Location::Cycle(CyclePoint::new(cycle, xi)), mult);
        }
    }
    let placed: i64 = d.terms.iter().map(|(_, m)| m).sum();
    d.wg = degree - placed;
    d
}

/// A divisor linearly equivalent to `d`, obtained by a few random
/// principal moves: sliding chips across bridges, rewriting a chip with a
/// full-period shift of its coordinate, and adding per-cycle relations
/// `<a> + <b> - <a + b> - <0>`.
pub fn random_principal_twin<R: Rng>(
    rng: &mut R,
    spec: &ChainSpec,
    d: &ChainDivisor,
) -> ChainDivisor {
    let g = spec.genus();
    let mut out = d.clone();
    for _ in 0..rng.gen_range(1..=4) {
        match rng.gen_range(0..4) {
            // w_i ~ v_{i+1}: add the degree-0 pair.
            0 if g >= 2 => {
                let i = rng.gen_range(1..g);
                let sign = if rng.gen() { 1 } else { -1 };
                out.push(Location::Cycle(CyclePoint::new(i, Rat::zero())), sign);
                out.push(Location::Cycle(CyclePoint::new(i + 1, Rat::from_int(-1))), -sign);
            }
            // A bridge chip equals its left endpoint.
            1 if g >= 2 => {
                let b = rng.gen_range(1..g);
                out.push(Location::Bridge(b), 1);
                out.push(Location::Cycle(CyclePoint::new(b, Rat::zero())), -1);
            }
            // Same point, coordinate shifted by the cycle period.
            2 => {
                let i = rng.gen_range(1..=g);
                if let Some(span) = spec.cycle_span(i) {
                    let xi = random_rat(rng, 3, &[1, 2]);
                    let shift = Rat::from_int(rng.gen_range(1..=2));
                    out.push(Location::Cycle(CyclePoint::new(i, xi.clone())), 1);
                    out.push(
                        Location::Cycle(CyclePoint::new(i, xi + span * shift)),
                        -1,
                    );
                }
            }
            // <a> + <b> - <a+b> - <0> is principal on any cycle.
            _ => {
                let i = rng.gen_range(1..=g);
                let a = random_rat(rng, 3, &[1, 2, 3]);
                let b = random_rat(rng, 3, &[1, 2, 3]);
                out.push(Location::Cycle(CyclePoint::new(i, a.clone())), 1);
                out.push(Location::Cycle(CyclePoint::new(i, b.clone())), 1);
                out.push(Location::Cycle(CyclePoint::new(i, a + b)), -1);
                out.push(Location::Cycle(CyclePoint::new(i, Rat::zero())), -1);
            }
        }
    }
    out
}

/// One cross-check trial: a random divisor with degree in
/// `[-1, max_degree]` and positions on the scaled lattice, ranked by both
/// pipelines.
pub fn verify_trial(
    spec: &ChainSpec,
    seed: u64,
    index: u64,
    max_degree: i64,
) -> Result<CrossCheckReport> {
    let mut rng = trial_rng(seed, index);
    let degree = rng.gen_range(-1..=max_degree);
    let d = random_divisor(&mut rng, spec, degree, &[1, 2]);
    let mut report = oracle::cross_check(spec, &d)?;
    report.seed = Some(seed.wrapping_add(index));
    Ok(report)
}

/// Runs `trials` cross-check trials, fanned out over up to `threads`
/// workers, reports in trial order.
pub fn verify_suite(
    spec: &ChainSpec,
    trials: u64,
    seed: u64,
    max_degree: i64,
    threads: usize,
) -> Result<Vec<CrossCheckReport>> {
    let threads = threads.max(1).min(trials.max(1) as usize);
    if threads == 1 {
        return (0..trials)
            .map(|i| verify_trial(spec, seed, i, max_degree))
            .collect();
    }
    let mut slots: Vec<Option<Result<CrossCheckReport>>> = Vec::new();
    slots.resize_with(trials as usize, || None);
    let next = std::sync::atomic::AtomicU64::new(0);
    let slots_mutex = std::sync::Mutex::new(&mut slots);
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= trials {
                    break;
                }
                let r = verify_trial(spec, seed, i, max_degree);
                slots_mutex.lock().unwrap()[i as usize] = Some(r);
            });
        }
    });
    slots.into_iter().map(|s| s.unwrap()).collect()
}
