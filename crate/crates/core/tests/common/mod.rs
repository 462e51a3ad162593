//! Shared oracles and the invariant property suite.
//!
//! Every `check_*` function runs one property and reports failure as a
//! string, so the same checks back both the `invariants` test target and the
//! acceptance run.
#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use steklov_core::numtheory::{classify, find_witnesses, straddling_gap, verify_empty_interval, Rationality};
use steklov_core::recovery::{peel_once, recover, PeelParams};
use steklov_core::spectra::{
    annulus_radial_eigenvalue, annulus_spectrum, disk_spectrum, synthetic_spectrum, union_spectrum,
    weighted_disk_spectrum,
};
use steklov_core::{
    merge_progressions, tail_max_gap, GeneratorSet, NoiseModel, SortedSpectrum, SpectrumFile, SpectrumMeta, WeightSpec,
};

pub const CASES: u32 = 100;

/// Relative tolerance on recovered generators for noiseless input.
pub const EXACT_RECOVERY_TOL: f64 = 1e-6;
/// Relative tolerance on recovered generators under decaying noise.
pub const NOISY_RECOVERY_TOL: f64 = 1e-3;

pub fn s_of(alphas: &[f64], cutoff: f64) -> SortedSpectrum {
    merge_progressions(&GeneratorSet::new(alphas.to_vec()).unwrap(), cutoff).unwrap()
}

/// Cutoff giving `S(R)` at least `count` elements.
pub fn cutoff_for_count(alphas: &[f64], count: usize) -> f64 {
    let inv: f64 = alphas.iter().map(|a| 1.0 / a).sum();
    let max = alphas.iter().copied().fold(0.0, f64::max);
    (count as f64 / 2.0) / inv + max
}

/// Independent counting oracle: `|R| + 2 Σ ⌊Λ/α⌋`.
pub fn counting_oracle(alphas: &[f64], cutoff: f64) -> usize {
    alphas.len() + 2 * alphas.iter().map(|a| (cutoff / a).floor() as usize).sum::<usize>()
}

/// Whether `sub` is a sub-multiset of `sup` (both sorted).
pub fn is_sub_multiset(sub: &[f64], sup: &[f64]) -> bool {
    let mut i = 0;
    for &x in sub {
        while i < sup.len() && sup[i] < x {
            i += 1;
        }
        if i == sup.len() || sup[i] != x {
            return false;
        }
        i += 1;
    }
    true
}

fn is_valid(values: &[f64]) -> bool {
    SortedSpectrum::new(values.to_vec()).is_ok()
}

/// Ratios closer than this to a fraction with small denominator make two
/// progressions nearly collide over long stretches.
const RATIO_SEPARATION: f64 = 0.02;
const RATIO_MAX_DENOMINATOR: u32 = 4;

pub fn well_separated(alphas: &[f64]) -> bool {
    alphas.iter().enumerate().all(|(i, &a)| {
        alphas[..i].iter().all(|&b| {
            let r = a.max(b) / a.min(b);
            (1..=RATIO_MAX_DENOMINATOR).all(|q| {
                let p = (r * q as f64).round();
                (r - p / q as f64).abs() >= RATIO_SEPARATION
            })
        })
    })
}

/// Up to four generators in `[0.2, 5]` with well-separated ratios.
pub fn generator_sets() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.2f64..5.0, 1..=4).prop_filter("near-coincident ratios", |a| well_separated(a))
}

/// Deterministic draw from the same distribution as [`generator_sets`].
pub fn random_generator_set(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    loop {
        let alphas: Vec<f64> = (0..k).map(|_| rng.random_range(0.2..5.0)).collect();
        if well_separated(&alphas) {
            return alphas;
        }
    }
}

pub fn fixed_four_generator_set() -> Vec<f64> {
    random_generator_set(&mut ChaCha8Rng::seed_from_u64(4), 4)
}

/// Max relative error between two generator lists after sorting; `None` when
/// the counts differ.
pub fn generator_error(recovered: &[f64], truth: &[f64]) -> Option<f64> {
    if recovered.len() != truth.len() {
        return None;
    }
    let mut a = recovered.to_vec();
    let mut b = truth.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    Some(a.iter().zip(&b).map(|(x, y)| (x - y).abs() / y).fold(0.0, f64::max))
}

pub fn run<S: Strategy>(strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    let config = Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

// ---- multisets ----

pub fn check_merge_valid() -> Result<(), String> {
    run((generator_sets(), 1.0f64..200.0), |(alphas, cutoff)| {
        let s = s_of(&alphas, cutoff);
        ensure(is_valid(s.values()), || "invalid spectrum".into())?;
        ensure(s.zero_count() == alphas.len(), || format!("{} zeros", s.zero_count()))
    })
}

pub fn check_counting_identity() -> Result<(), String> {
    run(
        (prop::collection::vec(0.01f64..10.0, 1..=6), 0.5f64..500.0),
        |(alphas, cutoff)| {
            let n = s_of(&alphas, cutoff).len();
            let want = counting_oracle(&alphas, cutoff);
            ensure(n == want, || format!("|S| = {n}, oracle {want}"))
        },
    )
}

pub fn check_gap_bound() -> Result<(), String> {
    run((generator_sets(), 10.0f64..300.0), |(alphas, cutoff)| {
        let g = GeneratorSet::new(alphas.clone()).unwrap();
        let s = s_of(&alphas, cutoff);
        let tail: Vec<f64> = s.values().iter().copied().filter(|v| *v >= g.max()).collect();
        for w in tail.windows(2) {
            ensure(w[1] - w[0] <= g.min() * (1.0 + 1e-12), || {
                format!("gap {} above min {}", w[1] - w[0], g.min())
            })?;
        }
        Ok(())
    })
}

/// Every gap of `finer` lies inside a gap of `coarser` at least as long.
pub fn gaps_refine(finer: &[f64], coarser: &[f64]) -> bool {
    finer.windows(2).filter(|w| w[1] > w[0]).all(|w| {
        let below = coarser.partition_point(|v| *v <= w[0]);
        let above = coarser.partition_point(|v| *v < w[1]);
        match (below.checked_sub(1), coarser.get(above)) {
            (Some(i), Some(&hi)) => hi - coarser[i] >= w[1] - w[0],
            // the finer gap runs past the end of the coarser data
            _ => true,
        }
    })
}

pub fn check_monotone_refinement() -> Result<(), String> {
    run(
        (generator_sets(), 0.2f64..5.0, 5.0f64..200.0),
        |(alphas, extra, cutoff)| {
            let coarse = s_of(&alphas, cutoff);
            let mut more = alphas.clone();
            more.push(extra);
            let fine = s_of(&more, cutoff);
            ensure(gaps_refine(fine.values(), coarse.values()), || "a gap grew".into())
        },
    )
}

pub fn check_tail_gap_normalized() -> Result<(), String> {
    run((generator_sets(), 20.0f64..500.0), |(alphas, cutoff)| {
        let min = alphas.iter().copied().fold(f64::INFINITY, f64::min);
        let normalized: Vec<f64> = alphas.iter().map(|a| a / min).collect();
        let s = s_of(&normalized, cutoff);
        let g = tail_max_gap(&s, 0.5).unwrap();
        ensure(g <= 1.0 + 1e-12, || format!("tail gap {g}"))
    })
}

/// Tail gaps of the normalized acceptance sets, at growing cutoffs.
pub fn tail_gap_growth(alphas: &[f64], cutoffs: &[f64]) -> Vec<f64> {
    let min = alphas.iter().copied().fold(f64::INFINITY, f64::min);
    let normalized: Vec<f64> = alphas.iter().map(|a| a / min).collect();
    cutoffs
        .iter()
        .map(|&c| tail_max_gap(&s_of(&normalized, c), 0.5).unwrap())
        .collect()
}

pub fn acceptance_generator_sets() -> Vec<Vec<f64>> {
    vec![
        vec![TAU],
        vec![1.0, 0.5],
        vec![1.0, 1.0, 2.0],
        fixed_four_generator_set(),
        vec![1.0, PI],
    ]
}

pub fn check_tail_gap_limit() -> Result<(), String> {
    for alphas in acceptance_generator_sets() {
        let g = tail_gap_growth(&alphas, &[1e2, 1e3, 1e4]);
        if g.iter().any(|x| *x > 1.0 + 1e-12) || g[2] < 0.9 {
            return Err(format!("{alphas:?}: tail gaps {g:?}"));
        }
    }
    Ok(())
}

// ---- spectra ----

/// Small positive weights: `a0 = 1` plus coefficients with total size < 0.9.
pub fn weights() -> impl Strategy<Value = WeightSpec> {
    prop::collection::vec(-1.0f64..1.0, 0..=6).prop_map(|raw| {
        let total: f64 = raw.iter().map(|c| c.abs()).sum::<f64>().max(1.0);
        let coeffs: Vec<f64> = raw.iter().map(|c| 0.8 * c / total).collect();
        let mut all = vec![1.0];
        all.extend(coeffs);
        WeightSpec::from_interleaved(&all).unwrap()
    })
}

pub fn check_generators_valid() -> Result<(), String> {
    run(
        (
            0.1f64..10.0,
            1.0f64..100.0,
            0.1f64..0.9,
            1u32..60,
            weights(),
            generator_sets(),
            0.0f64..0.2,
            any::<u64>(),
        ),
        |(radius, cutoff, inner, modes, w, alphas, c, seed)| {
            ensure(is_valid(disk_spectrum(radius, cutoff).unwrap().values()), || {
                "disk".into()
            })?;
            ensure(is_valid(annulus_spectrum(inner, 1.0, modes).unwrap().values()), || {
                "annulus".into()
            })?;
            let wd = weighted_disk_spectrum(&w, 12).unwrap();
            ensure(is_valid(wd.values()) && wd.len() == 25, || "weighted disk".into())?;
            let g = GeneratorSet::new(alphas).unwrap();
            let noisy = synthetic_spectrum(&g, &NoiseModel::exp_decay(c, 0.1, seed), cutoff).unwrap();
            ensure(is_valid(noisy.values()), || "synthetic".into())?;
            let u = union_spectrum(&[wd, noisy]).unwrap();
            ensure(is_valid(u.values()), || "union".into())
        },
    )
}

pub fn check_disk_equals_merge() -> Result<(), String> {
    run((0.05f64..20.0, 0.5f64..500.0), |(r, cutoff)| {
        let disk = disk_spectrum(r, cutoff).unwrap();
        let merged = s_of(&[1.0 / r], cutoff);
        ensure(disk == merged, || "disk and merge differ".into())
    })
}

pub fn check_union_laws() -> Result<(), String> {
    let part = (prop::collection::vec(0.2f64..5.0, 1..=3), 1.0f64..60.0);
    run((part.clone(), part.clone(), part), |((a, ca), (b, cb), (c, cc))| {
        let (a, b, c) = (s_of(&a, ca), s_of(&b, cb), s_of(&c, cc));
        let ab_c = union_spectrum(&[union_spectrum(&[a.clone(), b.clone()]).unwrap(), c.clone()]).unwrap();
        let a_bc = union_spectrum(&[a.clone(), union_spectrum(&[b.clone(), c.clone()]).unwrap()]).unwrap();
        let cba = union_spectrum(&[c, b, a]).unwrap();
        ensure(ab_c == a_bc, || "not associative".into())?;
        ensure(ab_c == cba, || "not commutative".into())
    })
}

pub fn check_annulus_multiplicity() -> Result<(), String> {
    run((0.05f64..0.95, 0.5f64..3.0, 1u32..200), |(ratio, outer, modes)| {
        let inner = ratio * outer;
        let s = annulus_spectrum(inner, outer, modes).unwrap();
        ensure(s.zero_count() == 1, || format!("{} zeros", s.zero_count()))?;
        let radial = annulus_radial_eigenvalue(inner, outer).unwrap();
        let mut rest: Vec<f64> = s.values()[1..].to_vec();
        let at = rest.iter().position(|v| *v == radial).unwrap();
        rest.remove(at);
        let mut i = 0;
        while i < rest.len() {
            let run = rest[i..].iter().take_while(|v| **v == rest[i]).count();
            ensure(run % 2 == 0, || format!("{} appears {run} times", rest[i]))?;
            i += run;
        }
        Ok(())
    })
}

pub const ROTATION_TOL: f64 = 1e-9;

pub fn check_rotation_invariance() -> Result<(), String> {
    run((weights(), 0.0f64..TAU), |(w, phi)| {
        let a = weighted_disk_spectrum(&w, 16).unwrap();
        let b = weighted_disk_spectrum(&w.rotated(phi), 16).unwrap();
        let scale = a.max().unwrap();
        let worst = a
            .values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        ensure(worst <= ROTATION_TOL * scale, || {
            format!("rotation moved an eigenvalue by {worst}")
        })
    })
}

pub fn check_constant_weight() -> Result<(), String> {
    run((0.05f64..20.0, 1usize..80), |(c, modes)| {
        let s = weighted_disk_spectrum(&WeightSpec::constant(c), modes).unwrap();
        let mut want = vec![0.0];
        for n in 1..=modes {
            let v = n as f64 / c;
            want.extend([v, v]);
        }
        ensure(s.values() == want.as_slice(), || "constant weight is not |n|/c".into())
    })
}

pub fn check_homogeneity() -> Result<(), String> {
    run(
        (generator_sets(), 1.0f64..100.0, 0.1f64..10.0, -6i32..6),
        |(alphas, cutoff, t, e)| {
            // powers of two scale every product exactly
            let p = 2f64.powi(e);
            let scaled: Vec<f64> = alphas.iter().map(|a| a * p).collect();
            let exact = s_of(&scaled, cutoff * p);
            ensure(exact == s_of(&alphas, cutoff).scaled(p).unwrap(), || {
                format!("not exact under t = {p}")
            })?;

            let scaled: Vec<f64> = alphas.iter().map(|a| a * t).collect();
            // cutoff between elements so rounding cannot move an element across it
            let base = s_of(&alphas, cutoff);
            let top = base.max().unwrap();
            let next = s_of(&alphas, cutoff + 10.0).values()[base.len()];
            let mid = 0.5 * (top + next);
            let a = s_of(&scaled, mid * t);
            let b = s_of(&alphas, mid).scaled(t).unwrap();
            ensure(a.len() == b.len(), || "lengths differ".into())?;
            let worst = a
                .values()
                .iter()
                .zip(b.values())
                .map(|(x, y)| (x - y).abs() / y.max(1e-300))
                .fold(0.0, f64::max);
            ensure(worst <= 4.0 * f64::EPSILON, || format!("relative deviation {worst}"))?;

            let r = 1.0 / alphas[0];
            let d = disk_spectrum(r / p, cutoff * p).unwrap();
            ensure(d == disk_spectrum(r, cutoff).unwrap().scaled(p).unwrap(), || {
                "disk does not scale".into()
            })
        },
    )
}

// ---- recovery ----

pub fn recovery_sets() -> impl Strategy<Value = (Vec<f64>, f64)> {
    generator_sets().prop_map(|a| {
        let cutoff = cutoff_for_count(&a, 10_000);
        (a, cutoff)
    })
}

pub fn check_peel_containment_and_count() -> Result<(), String> {
    run(recovery_sets(), |(alphas, cutoff)| {
        let s = s_of(&alphas, cutoff);
        let min = alphas.iter().copied().fold(f64::INFINITY, f64::min);
        let (rest, step) = peel_once(&s, min, &PeelParams::default()).unwrap();
        ensure(is_sub_multiset(rest.values(), s.values()), || {
            "remainder not contained".into()
        })?;
        let js: Vec<usize> = step.removed_pairs.iter().map(|p| p.0).collect();
        let want: Vec<usize> = (step.n0 + 1..=step.j_max).collect();
        ensure(js == want, || {
            format!("removed integers {}..={} of N0 = {}", js[0], js[js.len() - 1], step.n0)
        })?;
        let mut removed: Vec<f64> = step.removed_pairs.iter().flat_map(|p| [p.1, p.2]).collect();
        removed.sort_by(f64::total_cmp);
        ensure(is_sub_multiset(&removed, s.values()), || {
            "removed values not in input".into()
        })?;
        ensure(rest.len() + removed.len() + step.discarded_above == s.len(), || {
            "elements lost".into()
        })
    })
}

pub fn check_exact_recovery() -> Result<(), String> {
    run(recovery_sets(), |(alphas, cutoff)| {
        let s = s_of(&alphas, cutoff);
        let report = recover(&s, &PeelParams::default()).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let err = generator_error(report.generators.alphas(), &alphas);
        ensure(err.is_some_and(|e| e <= EXACT_RECOVERY_TOL), || {
            format!("recovered {:?} for {alphas:?}", report.generators.alphas())
        })
    })
}

pub fn check_noise_robustness() -> Result<(), String> {
    let params = PeelParams::default();
    let noise = (0.001f64..0.1, 0.05f64..0.5, any::<u64>())
        .prop_filter("envelope too large at the skipped prefix", move |(c, beta, _)| {
            c * (-beta * params.skip_prefix as f64).exp() < params.proximity_threshold / 4.0
        });
    run((recovery_sets(), noise), |((alphas, cutoff), (c, beta, seed))| {
        let g = GeneratorSet::new(alphas.clone()).unwrap();
        let s = synthetic_spectrum(&g, &NoiseModel::exp_decay(c, beta, seed), cutoff).unwrap();
        let report = recover(&s, &params).map_err(|e| TestCaseError::fail(e.to_string()))?;
        ensure(
            generator_error(report.generators.alphas(), &alphas).is_some_and(|e| e <= NOISY_RECOVERY_TOL),
            || format!("recovered {:?} for {alphas:?}", report.generators.alphas()),
        )
    })
}

pub const SCALE_TOL: f64 = 1e-9;

pub fn check_scale_equivariance() -> Result<(), String> {
    run((recovery_sets(), -8i32..8, 0.1f64..10.0), |((alphas, cutoff), e, t)| {
        let params = PeelParams::default();
        let s = s_of(&alphas, cutoff);
        let base = recover(&s, &params).unwrap().profile.lengths;

        let p = 2f64.powi(e);
        let scaled = recover(&s.scaled(p).unwrap(), &params).unwrap().profile.lengths;
        let want: Vec<f64> = base.iter().map(|l| l / p).collect();
        ensure(scaled == want, || format!("t = {p}: {scaled:?} vs {want:?}"))?;

        let scaled = recover(&s.scaled(t).unwrap(), &params).unwrap().profile.lengths;
        ensure(scaled.len() == base.len(), || "component count changed".into())?;
        let worst = scaled
            .iter()
            .zip(&base)
            .map(|(a, b)| (a * t - b).abs() / b)
            .fold(0.0, f64::max);
        ensure(worst <= SCALE_TOL, || format!("t = {t}: relative deviation {worst}"))
    })
}

pub fn check_determinism() -> Result<(), String> {
    run((recovery_sets(), any::<u64>()), |((alphas, cutoff), seed)| {
        let g = GeneratorSet::new(alphas).unwrap();
        let noise = NoiseModel::exp_decay(0.01, 0.2, seed);
        let a = synthetic_spectrum(&g, &noise, cutoff).unwrap();
        let b = synthetic_spectrum(&g, &noise, cutoff).unwrap();
        ensure(a == b, || "synthetic spectra differ".into())?;
        let params = PeelParams::default();
        ensure(recover(&a, &params).ok() == recover(&b, &params).ok(), || {
            "reports differ".into()
        })
    })
}

// ---- number theory ----

/// `{1, β}` or `{1, β, γ}` with irrational-looking extra generators.
pub fn normalized_sets() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(1.05f64..6.0, 1..=2).prop_map(|extra| {
        let mut all = vec![1.0];
        all.extend(extra);
        all
    })
}

pub fn check_witness_self_check() -> Result<(), String> {
    run((normalized_sets(), 10u64..3000), |(alphas, q_max)| {
        let search = find_witnesses(&GeneratorSet::new(alphas).unwrap(), q_max, 1e-9).unwrap();
        for w in &search.witnesses {
            ensure(w.holds(), || format!("witness q = {} fails its own inequality", w.q))?;
            // independent check of the residuals
            for a in &w.approximants {
                let qx = (w.q * w.x) as f64;
                let r = (qx - a.p as f64 * a.alpha).abs();
                ensure(
                    r == a.residual && r < a.alpha * (w.q as f64).powf(-1.0 / w.m as f64),
                    || format!("q = {}: residual {r}", w.q),
                )?;
            }
        }
        Ok(())
    })
}

pub fn check_straddling_gaps() -> Result<(), String> {
    run((normalized_sets(), 100u64..3000), |(alphas, q_max)| {
        let g = GeneratorSet::new(alphas.clone()).unwrap();
        let search = find_witnesses(&g, q_max, 1e-9).unwrap();
        let cutoff = (q_max * search.x) as f64 + 2.0;
        let s = merge_progressions(&g, cutoff).unwrap();
        for w in &search.witnesses {
            ensure(verify_empty_interval(&g, w, cutoff).unwrap(), || {
                format!("q = {}: interval not empty", w.q)
            })?;
            let bound = 1.0 - 2.0 * w.radius();
            let gap = straddling_gap(&s, w).unwrap();
            ensure(gap >= bound - 1e-9, || format!("q = {}: gap {gap} below {bound}", w.q))?;
        }
        Ok(())
    })
}

pub fn check_rational_detection() -> Result<(), String> {
    run((1u64..500, 1u64..=50, -15.0f64..-8.0), |(a, b, log_tol)| {
        let x = a as f64 / b as f64;
        let g = gcd(a, b);
        let want = Rationality::Rational {
            numerator: a / g,
            denominator: b / g,
        };
        let got = classify(x, 10f64.powf(log_tol));
        ensure(got == want, || format!("{a}/{b} classified {got:?}"))
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

// ---- file format ----

pub fn check_format_round_trip() -> Result<(), String> {
    run(
        (generator_sets(), 1.0f64..200.0, 0.0f64..0.2, any::<u64>()),
        |(alphas, cutoff, c, seed)| {
            let g = GeneratorSet::new(alphas).unwrap();
            let s = synthetic_spectrum(&g, &NoiseModel::power_decay(c, 1.5, seed), cutoff).unwrap();
            let file = SpectrumFile::new(
                SpectrumMeta {
                    truth: Some(g.lengths()),
                    seed: Some(seed),
                    ..Default::default()
                },
                s,
            );
            let text = file.to_text();
            let back = SpectrumFile::parse(&text).map_err(|e| TestCaseError::fail(e.to_string()))?;
            ensure(back == file, || "round trip changed the spectrum".into())?;
            ensure(back.to_text() == text, || "re-serialization differs".into())
        },
    )
}

/// Every invariant, in order.
pub type Check = fn() -> Result<(), String>;

pub fn invariant_suite() -> Vec<(&'static str, Check)> {
    vec![
        ("merge output is a valid spectrum", check_merge_valid),
        ("counting identity", check_counting_identity),
        ("gap bound above max(R)", check_gap_bound),
        ("monotone refinement", check_monotone_refinement),
        ("normalized tail gap <= 1", check_tail_gap_normalized),
        ("tail gap approaches 1", check_tail_gap_limit),
        ("generators return valid spectra", check_generators_valid),
        ("disk equals merge", check_disk_equals_merge),
        ("union associative and commutative", check_union_laws),
        ("annulus multiplicities", check_annulus_multiplicity),
        ("weighted disk rotation invariance", check_rotation_invariance),
        ("constant weight gives |n|/c", check_constant_weight),
        ("homogeneity", check_homogeneity),
        ("peel containment and count", check_peel_containment_and_count),
        ("exact recovery", check_exact_recovery),
        ("noise robustness", check_noise_robustness),
        ("scale equivariance", check_scale_equivariance),
        ("determinism", check_determinism),
        ("witness self-check", check_witness_self_check),
        ("straddling gaps", check_straddling_gaps),
        ("rational detection", check_rational_detection),
        ("file round trip", check_format_round_trip),
    ]
}
