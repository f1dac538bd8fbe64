//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its measured numbers (run with `--nocapture` to see them). Tests share a
//! lock so the runtime budgets are measured without contention.

mod common;

use std::sync::Mutex;
use std::time::Instant;

use common::RP2_FACETS;
use htl_core::bits::Bitset;
use htl_core::experiments::{
    count_empty_boundaries, exact_prob_top_nonzero, moment_report, sweep, SweepConfig, SweepTarget,
};
use htl_core::homology::{
    betti_top, rank_boundary, rank_top_boundary, torsion_codim1, CoefficientSpec,
};
use htl_core::linalg::boundary_matrix_gf2;
use htl_core::model::{sample, ComplexSample, ModelParams};
use htl_core::rho::{
    generate_constellation, rho_bound, rho_exact, rim_count, Gf2Chain, RhoQuery, DEFAULT_ENUM_CAP,
};
use htl_core::rng::{derive_stream, stream_rng};
use htl_core::simplex::{
    binomial, enumerate_simplices, simplex_count, unrank_simplex, Simplex, SimplexRank,
};
use num_bigint::BigInt;
use rand::Rng;
use rayon::prelude::*;

static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> std::sync::MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

#[test]
fn criterion_01_oracle_equivalence() {
    let _guard = serial();
    let start = Instant::now();
    let trials = 100_000u64;
    let mut max_z = 0.0f64;
    for (n, d) in [(5usize, 1usize), (5, 2), (6, 1)] {
        for p in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let exact = exact_prob_top_nonzero(n, d, p, DEFAULT_ENUM_CAP).unwrap();
            let params = ModelParams::new(n, d, p).unwrap();
            let seed = derive_stream(0xACC1, (n * 100 + d * 10) as u64) ^ p.to_bits();
            let hits = (0..trials)
                .into_par_iter()
                .filter(|&t| betti_top(&sample(&params, seed, t), CoefficientSpec::Gf2) > 0)
                .count() as u64;
            let estimate = hits as f64 / trials as f64;
            let sigma = (exact * (1.0 - exact) / trials as f64).sqrt();
            let z = (estimate - exact).abs() / sigma;
            max_z = max_z.max(z);
            assert!(
                (estimate - exact).abs() <= 3.0 * sigma,
                "(n={n}, d={d}, p={p}): estimate {estimate} vs exact {exact}, z = {z:.2}"
            );
        }
    }
    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 120.0, "runtime budget 2 min exceeded: {secs:.1}s");
    println!("acceptance 01 oracle equivalence: PASS — 15/15 within 3 sigma (max z = {max_z:.2}), {secs:.1}s");
}

#[test]
fn criterion_02_bound_dominance_d1() {
    let _guard = serial();
    let start = Instant::now();
    let config = SweepConfig {
        n: 200,
        d: 1,
        w_grid: vec![0.1, 0.2, 0.3, 0.4, 0.5],
        trials: 5000,
        master_seed: 0xACC2,
        coeff: CoefficientSpec::Gf2,
        target: SweepTarget::Top,
    };
    let result = sweep(&config).unwrap();
    for pt in &result.points {
        let bound = pt.w.powi(3) / (1.0 - pt.w);
        assert_eq!(pt.bound, Some(bound));
        let half = (pt.ci_high - pt.ci_low) / 2.0;
        assert!(
            pt.estimate <= bound + 3.0 * half,
            "w = {}: estimate {} above bound {bound} + 3*{half}",
            pt.w,
            pt.estimate
        );
    }
    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 300.0, "runtime budget 5 min exceeded: {secs:.1}s");
    println!("acceptance 02 bound dominance d=1: PASS — 5/5 points below w^3/(1-w), {secs:.1}s");
}

#[test]
fn criterion_03_bound_dominance_d2() {
    let _guard = serial();
    let start = Instant::now();
    let config = SweepConfig {
        n: 100,
        d: 2,
        w_grid: vec![0.1, 0.2, 0.3, 0.4, 0.5],
        trials: 2000,
        master_seed: 0xACC3,
        coeff: CoefficientSpec::Gf2,
        target: SweepTarget::Top,
    };
    let result = sweep(&config).unwrap();
    for pt in &result.points {
        let bound = 18.0 * pt.w.powi(4) / (1.0 - pt.w).powi(2);
        let half = (pt.ci_high - pt.ci_low) / 2.0;
        assert!(
            pt.estimate <= bound + 3.0 * half,
            "w = {}: estimate {} above bound {bound}",
            pt.w,
            pt.estimate
        );
    }
    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 900.0, "runtime budget 15 min exceeded: {secs:.1}s");
    println!("acceptance 03 bound dominance d=2: PASS — 5/5 points below 18w^4/(1-w)^2, {secs:.1}s");
}

#[test]
fn criterion_04_threshold_crossing() {
    let _guard = serial();
    let start = Instant::now();
    let low = sweep(&SweepConfig {
        n: 150,
        d: 2,
        w_grid: vec![0.2],
        trials: 2000,
        master_seed: 0xACC4,
        coeff: CoefficientSpec::Gf2,
        target: SweepTarget::Top,
    })
    .unwrap();
    let high = sweep(&SweepConfig {
        n: 150,
        d: 2,
        w_grid: vec![20.0],
        trials: 200,
        master_seed: 0xACC4 + 1,
        coeff: CoefficientSpec::Gf2,
        target: SweepTarget::Top,
    })
    .unwrap();
    let (lo, hi) = (low.points[0].estimate, high.points[0].estimate);
    assert!(lo < 0.05, "estimate at w = 0.2 must be < 0.05, got {lo}");
    assert!(hi > 0.95, "estimate at w = 20 must be > 0.95, got {hi}");
    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 1200.0, "runtime budget 20 min exceeded: {secs:.1}s");
    println!("acceptance 04 threshold crossing: PASS — estimate(0.2) = {lo}, estimate(20) = {hi}, {secs:.1}s");
}

#[test]
fn criterion_05_second_moment() {
    let _guard = serial();
    let start = Instant::now();
    let (n, d, p) = (30usize, 2usize, 0.1f64);
    let trials = 10_000u64;
    let params = ModelParams::new(n, d, p).unwrap();
    // witness soundness on every trial, reusing the moment seeding
    let violations = (0..trials)
        .into_par_iter()
        .filter(|&t| {
            let delta = sample(&params, 0xACC5, t);
            count_empty_boundaries(&delta) > 0
                && betti_top(&delta, CoefficientSpec::Gf2) == 0
        })
        .count();
    assert_eq!(violations, 0, "X > 0 must imply beta_2 > 0");
    let stats = moment_report(n, d, p, trials, 0xACC5).unwrap();
    let expect = binomial(30, 4) as f64 * 1e-4;
    let sem = (stats.var_x / trials as f64).sqrt();
    assert!(
        (stats.mean_x - expect).abs() <= 3.0 * sem,
        "mean {} vs E(X) = {expect} (sem {sem})",
        stats.mean_x
    );
    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 300.0, "runtime budget 5 min exceeded: {secs:.1}s");
    println!(
        "acceptance 05 second moment: PASS — mean X = {:.4} vs {expect:.4}, witness soundness on {trials} trials, {secs:.1}s",
        stats.mean_x
    );
}

#[test]
fn criterion_06_upper_bound_validation() {
    let _guard = serial();
    let start = Instant::now();
    let mut rng = stream_rng(derive_stream(0xACC6, 0));
    let (n, d) = (5usize, 2usize);
    let top = simplex_count(n, d) as usize;
    for &w in &[0.25f64, 0.5] {
        let p = w / n as f64;
        let params = ModelParams::new(n, d, p).unwrap();
        let mut tested = 0;
        while tested < 200 {
            // sigma = boundary of a random top chain: always a cycle
            let mask: u16 = rng.random();
            let sigma = Gf2Chain::from_support(
                n,
                d,
                Bitset::from_indices(top, (0..top as u64).filter(|r| mask >> r & 1 == 1)),
            )
            .unwrap()
            .boundary();
            let density = rng.random_range(0.0..0.5);
            let forbidden = Bitset::from_indices(
                top,
                (0..top as u64).filter(|_| rng.random::<f64>() < density),
            );
            let lambda = rng.random_range(0..4u32);
            let q = RhoQuery::new(params, sigma, forbidden, lambda).unwrap();
            if !q.sigma_member() {
                continue;
            }
            tested += 1;
            let exact = rho_exact(&q, DEFAULT_ENUM_CAP).unwrap();
            let bound = rho_bound(d, lambda, p, w).unwrap();
            assert!(
                exact <= bound + 1e-12,
                "violation: rho = {exact} > bound = {bound} (lambda {lambda}, w {w})"
            );
        }
    }
    let secs = start.elapsed().as_secs_f64();
    println!("acceptance 06 closed-form bound: PASS — 400 gated instances, zero violations, {secs:.1}s");
}

#[test]
fn criterion_07_rho_properties() {
    let _guard = serial();
    let start = Instant::now();
    let (n, d) = (5usize, 2usize);
    let top = simplex_count(n, d) as usize;
    let params = ModelParams::new(n, d, 0.3).unwrap();
    let mut rng = stream_rng(derive_stream(0xACC7, 0));
    let all = Bitset::from_indices(top, 0..top as u64);
    let mut checked = 0;
    while checked < 500 {
        checked += 1;
        let mask: u16 = rng.random();
        let sigma = Gf2Chain::from_support(
            n,
            d,
            Bitset::from_indices(top, (0..top as u64).filter(|r| mask >> r & 1 == 1)),
        )
        .unwrap()
        .boundary();
        let s1 = Bitset::from_indices(
            top,
            (0..top as u64).filter(|_| rng.random::<f64>() < 0.4),
        );
        let s2 = Bitset::from_indices(
            top,
            s1.iter_ones()
                .filter(|_| rng.random::<f64>() < 0.6)
                .map(|i| i as u64),
        );
        // (1) monotone in the forbidden set
        let r1 = rho_exact(
            &RhoQuery::new(params, sigma.clone(), s1.clone(), 0).unwrap(),
            DEFAULT_ENUM_CAP,
        )
        .unwrap();
        let r2 = rho_exact(
            &RhoQuery::new(params, sigma.clone(), s2, 0).unwrap(),
            DEFAULT_ENUM_CAP,
        )
        .unwrap();
        assert!(r1 <= r2 + 1e-12, "(1) violated: {r1} > {r2}");
        // (2) independent of lambda
        let ra = rho_exact(
            &RhoQuery::new(params, sigma.clone(), s1.clone(), 0).unwrap(),
            DEFAULT_ENUM_CAP,
        )
        .unwrap();
        let rb = rho_exact(
            &RhoQuery::new(params, sigma.clone(), s1, 1).unwrap(),
            DEFAULT_ENUM_CAP,
        )
        .unwrap();
        assert_eq!(ra, rb, "(2) violated");
        // (3) everything forbidden and sigma != 0 gives exactly zero
        if !sigma.is_zero() {
            let r = rho_exact(
                &RhoQuery::new(params, sigma.clone(), all.clone(), 0).unwrap(),
                DEFAULT_ENUM_CAP,
            )
            .unwrap();
            assert_eq!(r, 0.0, "(3) violated");
        }
        // (4) non-cycles give exactly zero
        let raw: u32 = rng.random();
        let support = Bitset::from_indices(
            simplex_count(n, d - 1) as usize,
            (0..simplex_count(n, d - 1)).filter(|i| raw >> (i % 32) & 1 == 1),
        );
        let chain = Gf2Chain::from_support(n, d - 1, support).unwrap();
        if !chain.boundary_is_zero() {
            let r = rho_exact(
                &RhoQuery::new(params, chain, Bitset::new(top), 0).unwrap(),
                DEFAULT_ENUM_CAP,
            )
            .unwrap();
            assert_eq!(r, 0.0, "(4) violated");
        }
    }
    let secs = start.elapsed().as_secs_f64();
    println!("acceptance 07 rho properties: PASS — 500 instances, zero violations, {secs:.1}s");
}

#[test]
fn criterion_08_constellation_claim() {
    let _guard = serial();
    let start = Instant::now();
    let mut rng = stream_rng(derive_stream(0xACC8, 0));
    for _ in 0..10_000 {
        let d = rng.random_range(2..=4usize);
        let n = rng.random_range(d + 3..=20usize);
        let t0 = unrank_simplex(
            SimplexRank(rng.random_range(0..simplex_count(n, d))),
            n,
            d,
        )
        .unwrap();
        let outside: Vec<usize> = (0..n).filter(|v| !t0.contains_vertex(*v)).collect();
        let apexes: Vec<usize> = (0..=d)
            .map(|_| outside[rng.random_range(0..outside.len())])
            .collect();
        let c = generate_constellation(n, d, &t0, &apexes).unwrap();
        let m = c.num_blocks() as i64;
        let support = c.chain(n).unwrap().boundary().support_size() as i64;
        let expected = ((d + 1) * (d + 1)) as i64
            - c.blocks().iter().map(|b| (b.len() * b.len()) as i64).sum::<i64>();
        assert_eq!(support, expected, "support identity violated");
        assert!(support > (m - 2) * (d as i64 + 1), "support inequality violated");
        let rim = rim_count(c.simplex_ranks(n).unwrap(), n, d) as i64;
        assert!(rim > (m - 2) * (d as i64 + 1), "rim inequality violated");
    }
    let secs = start.elapsed().as_secs_f64();
    println!("acceptance 08 constellation claim: PASS — 10000 constellations, zero violations, {secs:.1}s");
}

#[test]
fn criterion_09_homology_identities() {
    let _guard = serial();
    let start = Instant::now();
    for d in 1..=3usize {
        for n in (d + 1).max(3)..=10 {
            let s = ComplexSample::from_simplices(n, d, enumerate_simplices(n, d).unwrap())
                .unwrap();
            for coeff in [
                CoefficientSpec::Gf2,
                CoefficientSpec::Gfp(3),
                CoefficientSpec::Int,
            ] {
                assert_eq!(
                    betti_top(&s, coeff),
                    binomial(n - 1, d + 1),
                    "beta_top(full) at n={n}, d={d}, {coeff}"
                );
                assert_eq!(
                    rank_boundary(&s, d - 1, coeff).unwrap(),
                    binomial(n - 1, d - 1),
                    "rank of lower boundary at n={n}, d={d}, {coeff}"
                );
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    println!("acceptance 09 homology identities: PASS — exact over gf2/gfp:3/int, 3 <= n <= 10, d <= 3, {secs:.1}s");
}

#[test]
fn criterion_10_torsion_fixtures() {
    let _guard = serial();
    let rp2 = ComplexSample::from_simplices(
        6,
        2,
        RP2_FACETS.iter().map(|f| Simplex::new(f.to_vec()).unwrap()),
    )
    .unwrap();
    assert_eq!(torsion_codim1(&rp2), vec![BigInt::from(2)]);
    let tetra = ComplexSample::from_simplices(4, 2, enumerate_simplices(4, 2).unwrap()).unwrap();
    assert!(torsion_codim1(&tetra).is_empty());
    println!("acceptance 10 torsion: PASS — projective plane {{2}}, tetrahedron {{}}");
}

#[test]
fn criterion_11_performance() {
    let _guard = serial();
    // full 2-skeleton at n = 50: dense bit-packed rank under 2 s
    let s = ComplexSample::from_simplices(50, 2, enumerate_simplices(50, 2).unwrap()).unwrap();
    let m = boundary_matrix_gf2(&s, 2).unwrap();
    assert_eq!((m.rows(), m.cols()), (1225, 19600));
    let t = Instant::now();
    let rank = m.rank();
    let dense_secs = t.elapsed().as_secs_f64();
    assert_eq!(rank as u64, binomial(49, 2));
    assert!(dense_secs < 2.0, "dense rank took {dense_secs:.2}s");
    // one d = 2, n = 150, w = 20 trial: sample + rank under 10 s
    let params = ModelParams::new(150, 2, 20.0 / 150.0).unwrap();
    let t = Instant::now();
    let delta = sample(&params, 0xACCB, 0);
    let r = rank_top_boundary(&delta, CoefficientSpec::Gf2);
    let trial_secs = t.elapsed().as_secs_f64();
    assert!(r > 0);
    assert!(trial_secs < 10.0, "trial took {trial_secs:.2}s");
    println!(
        "acceptance 11 performance: PASS — 1225x19600 rank in {dense_secs:.2}s, n=150 w=20 trial in {trial_secs:.2}s"
    );
}
