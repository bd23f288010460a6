//! Acceptance suite: one PASS/FAIL line per criterion. Run with
//! `cargo test -p polyrank-core --test acceptance`.
//!
//! The degree-sum and pass-count bounds as stated are false at r = 1 and
//! q = 1. Those criteria print FAIL but are marked known failures when every
//! violation is of that degenerate kind and the corrected bounds hold; the
//! process exits nonzero on any other failure.

mod common;

use std::time::{Duration, Instant};

use common::{
    annihilates, ceil_log2, corrected_general_bound, field, naive_product, naive_rank_at, planted,
    stated_general_bound, structured_tall,
};
use polyrank::nullspace::with_retries;
use polyrank::oracle::{approximant_kernel_dimension, kronecker_indices, rank_oracle};
use polyrank::{
    mul_with, nullspace, nullspace_2n, nullspace_minimal_vectors, series_inverse, sigma_basis, Error, MulStrategy,
    NullspaceResult, PolyMatrix, RandomPlan, Shift, TwoNResult,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criterion lines, printed in order once all have run.
#[derive(Default)]
struct Report {
    lines: Vec<Line>,
}

struct Line {
    id: usize,
    pass: bool,
    known: bool,
    text: String,
}

impl Report {
    fn line(&mut self, id: usize, name: &str, pass: bool, detail: String) {
        let verdict = if pass { "PASS" } else { "FAIL" };
        self.lines.push(Line {
            id,
            pass,
            known: false,
            text: format!("criterion {id:>2} {name:<26} {verdict} ({detail})"),
        });
    }

    /// Marks a failure of the last line as the known defect of the stated
    /// bound when `degenerate_only` holds.
    fn known_failure(&mut self, degenerate_only: bool) {
        let last = self.lines.last_mut().expect("a line to mark");
        if !last.pass && degenerate_only {
            last.known = true;
            last.text
                .push_str("\n              known failure: every violation is at r = 1 or q = 1");
        }
    }

    /// Appends a diagnostic to the last line.
    fn note(&mut self, text: String) {
        let last = self.lines.last_mut().expect("a line to annotate");
        last.text.push_str(&format!("\n              note: {text}"));
    }

    /// Prints all lines; true unless some failure is not a known one.
    fn finish(mut self) -> bool {
        self.lines.sort_by_key(|l| l.id);
        for l in &self.lines {
            println!("{}", l.text);
        }
        let ids =
            |keep: fn(&Line) -> bool| -> Vec<usize> { self.lines.iter().filter(|l| keep(l)).map(|l| l.id).collect() };
        let failed = ids(|l| !l.pass);
        let unexpected = ids(|l| !l.pass && !l.known);
        if failed.is_empty() {
            println!("all criteria passed");
        } else {
            println!("failed criteria: {failed:?}, of which not known failures: {unexpected:?}");
        }
        unexpected.is_empty()
    }
}

/// One instance of the main fuzzed corpus.
struct Run {
    m: PolyMatrix,
    d: usize,
    oracle_rank: usize,
    outcome: Result<NullspaceResult, Error>,
    fresh_rank: Option<usize>,
}

fn corpus(rng: &mut ChaCha8Rng) -> Vec<Run> {
    let f = field();
    (0..500u64)
        .map(|i| {
            let rows = rng.gen_range(1..=24);
            let cols = rng.gen_range(1..=16);
            let full = rows.min(cols);
            let r = if rng.gen_bool(0.4) {
                full
            } else {
                rng.gen_range(0..=full)
            };
            let d = rng.gen_range(0..=5);
            let m = planted(f, rows, cols, r, d, rng);
            let outcome = nullspace(&m, &mut RandomPlan::new(1000 + i));
            let fresh_rank = outcome
                .as_ref()
                .ok()
                .map(|res| naive_rank_at(&res.basis, rng.gen_range(0..f.modulus())));
            Run {
                d: m.degree().to_usize().unwrap_or(0),
                oracle_rank: rank_oracle(&m).unwrap(),
                m,
                outcome,
                fresh_rank,
            }
        })
        .collect()
}

/// Direct `nullspace_2n` runs on `(n + q) x n` inputs.
fn twon_corpus(rng: &mut ChaCha8Rng) -> Vec<(usize, usize, usize, Result<TwoNResult, Error>)> {
    let f = field();
    (0..150u64)
        .map(|i| {
            let n = rng.gen_range(1..=10);
            let q = rng.gen_range(1..=n);
            let d = rng.gen_range(0..=4);
            let m = if i % 2 == 0 {
                PolyMatrix::random(f, n + q, n, d, rng)
            } else {
                structured_tall(f, n, q, d, rng)
            };
            let d = m.degree().to_usize().unwrap_or(0);
            let mut plan = RandomPlan::new(5000 + i);
            let out = with_retries(&mut plan, |p| nullspace_2n(&m, p)).map(|(r, _)| r);
            (n, q, d, out)
        })
        .collect()
}

fn criteria_1_2_4_8_9(report: &mut Report, rng: &mut ChaCha8Rng) {
    let start = Instant::now();
    let runs = corpus(rng);
    let elapsed = start.elapsed();
    let twon = twon_corpus(rng);

    // 1: exact annihilation and full row rank at a fresh point.
    let successes: Vec<(&Run, &NullspaceResult)> = runs
        .iter()
        .filter_map(|r| r.outcome.as_ref().ok().map(|o| (r, o)))
        .collect();
    let bad1: Vec<bool> = successes
        .iter()
        .map(|(run, res)| {
            let expected = run.m.rows() - res.rank;
            res.basis.rows() != expected || !annihilates(&res.basis, &run.m) || runs_fresh(run) != expected
        })
        .collect();
    let n_bad1 = bad1.iter().filter(|&&b| b).count();
    report.line(
        1,
        "exact annihilation",
        n_bad1 == 0 && elapsed < Duration::from_secs(60),
        format!(
            "{} instances, {} successful, {n_bad1} violations, corpus time {:.1}s",
            runs.len(),
            successes.len(),
            elapsed.as_secs_f64()
        ),
    );

    // 2: rank against the evaluation oracle.
    let bad2: Vec<bool> = successes.iter().map(|(run, res)| res.rank != run.oracle_rank).collect();
    let n_bad2 = bad2.iter().filter(|&&b| b).count();
    report.line(
        2,
        "rank correctness",
        n_bad2 == 0,
        format!("{n_bad2} mismatches over {} successful runs", successes.len()),
    );

    // 4: degree-sum bounds, as stated.
    let bad4: Vec<bool> = successes
        .iter()
        .map(|(run, res)| res.degree_sum > stated_general_bound(run.m.rows(), res.rank, run.d))
        .collect();
    let n_bad4_general = bad4.iter().filter(|&&b| b).count();
    let general_r1 = successes
        .iter()
        .zip(&bad4)
        .filter(|((_, res), &b)| b && res.rank == 1)
        .count();
    let general_corrected = successes
        .iter()
        .filter(|(run, res)| res.degree_sum > corrected_general_bound(run.m.rows(), res.rank, run.d))
        .count();
    // Every nullspace_2n output: residual calls of the driver and direct runs.
    let mut twon_outputs: Vec<(usize, usize, usize, usize, usize)> = successes
        .iter()
        .filter_map(|(_, res)| res.residual.as_ref())
        .map(|s| (s.n, s.q, s.d, s.degree_sum, s.passes.len()))
        .collect();
    twon_outputs.extend(
        twon.iter()
            .filter_map(|(n, q, d, out)| out.as_ref().ok().map(|r| (*n, *q, *d, r.degree_sum(), r.passes.len()))),
    );
    let twon_bad: Vec<&(usize, usize, usize, usize, usize)> = twon_outputs
        .iter()
        .filter(|&&(n, q, d, sum, _)| sum > n * d * ceil_log2(q))
        .collect();
    let twon_bad_q1 = twon_bad.iter().filter(|t| t.1 == 1).count();
    let twon_corrected = twon_outputs
        .iter()
        .filter(|&&(n, q, d, sum, _)| sum > n * d * ceil_log2(q + 1))
        .count();
    report.line(
        4,
        "degree-sum bound",
        n_bad4_general == 0 && twon_bad.is_empty(),
        format!(
            "nullspace: {n_bad4_general}/{} above r·d·⌈log₂ r⌉ + max(0, m-2r)·d ({general_r1} with r = 1); \
             nullspace_2n: {}/{} above n·d·⌈log₂ q⌉ ({twon_bad_q1} with q = 1)",
            successes.len(),
            twon_bad.len(),
            twon_outputs.len()
        ),
    );
    let degenerate_4 =
        general_r1 == n_bad4_general && twon_bad_q1 == twon_bad.len() && general_corrected + twon_corrected == 0;
    if n_bad4_general + twon_bad.len() > 0 {
        report.note(format!(
            "at r = 1 or q = 1 the stated bounds reduce to (m-2)·d and 0, below the degree of a single \
             nonzero vector; with ⌈log₂(r+1)⌉ and ⌈log₂(q+1)⌉ the violations are {general_corrected} and {twon_corrected}"
        ));
    }
    report.known_failure(degenerate_4);

    // 9: pass counts.
    let passes_bad: Vec<&(usize, usize, usize, usize, usize)> = twon_outputs
        .iter()
        .filter(|&&(_, q, _, _, passes)| passes > ceil_log2(q))
        .collect();
    let passes_q1 = passes_bad.iter().filter(|t| t.1 == 1).count();
    let floor_plus_one = twon_outputs
        .iter()
        .filter(|&&(_, q, _, _, passes)| passes > q.ilog2() as usize + 1)
        .count();
    let max_passes = twon_outputs.iter().map(|t| t.4).max().unwrap_or(0);
    report.line(
        9,
        "loop-count bound",
        passes_bad.is_empty(),
        format!(
            "{}/{} runs above ⌈log₂ q⌉ passes ({passes_q1} with q = 1), max passes {max_passes}",
            passes_bad.len(),
            twon_outputs.len()
        ),
    );
    if !passes_bad.is_empty() {
        report.note(format!(
            "halving from q to 0 takes ⌊log₂ q⌋ + 1 passes, which is 1 > ⌈log₂ 1⌉ = 0 at q = 1; \
             runs above ⌊log₂ q⌋ + 1: {floor_plus_one}"
        ));
    }
    report.known_failure(passes_q1 == passes_bad.len() && floor_plus_one == 0);

    // 8: Las Vegas discipline over the corpus.
    let first_fail = runs
        .iter()
        .filter(|r| r.outcome.as_ref().map_or(true, |o| o.retries_used > 0))
        .count();
    let total_fail = runs.iter().filter(|r| r.outcome.is_err()).count();
    let rate = first_fail as f64 / runs.len() as f64;
    let wrong_1_3 = bad1.iter().zip(&bad2).filter(|(a, b)| **a || **b).count();
    let wrong_4 = n_bad4_general;
    report.line(
        8,
        "Las Vegas discipline",
        rate < 0.05 && wrong_1_3 == 0 && wrong_4 == 0,
        format!(
            "first-attempt failure rate {:.1}%, {total_fail} runs out of retries, \
             successful runs violating 1-3: {wrong_1_3}, violating 4: {wrong_4}",
            100.0 * rate
        ),
    );
    report.known_failure(rate < 0.05 && wrong_1_3 == 0 && degenerate_4);
}

fn runs_fresh(run: &Run) -> usize {
    run.fresh_rank.unwrap_or(usize::MAX)
}

fn criterion_3(report: &mut Report, rng: &mut ChaCha8Rng) {
    let f = field();
    let mut mismatches = 0;
    let mut failures = 0;
    let mut calls = 0;
    for i in 0..200u64 {
        let n = rng.gen_range(1..=12);
        let p = rng.gen_range(1..=n);
        let d = rng.gen_range(0..=4);
        let m = if i % 2 == 0 {
            PolyMatrix::random(f, n + p, n, d, rng)
        } else {
            structured_tall(f, n, p, d, rng)
        };
        let profile = kronecker_indices(&m).unwrap();
        let mut deltas = vec![0, d, 2 * d, n * d];
        deltas.dedup();
        let mut plan = RandomPlan::new(20_000 + i);
        for delta in deltas {
            calls += 1;
            let expected: Vec<usize> = profile.indices.iter().copied().filter(|&k| k <= delta).collect();
            match nullspace_minimal_vectors(&m, delta, &mut plan) {
                Ok(res) => {
                    if res.kappa != expected.len() || res.degrees != expected {
                        mismatches += 1;
                    }
                }
                Err(Error::Fail(_)) => failures += 1,
                Err(e) => panic!("unexpected error {e}"),
            }
        }
    }
    report.line(
        3,
        "minimal-vector fidelity",
        mismatches == 0 && failures * 20 < calls,
        format!("{calls} calls on 200 instances, {mismatches} mismatches, {failures} failures"),
    );
}

fn criterion_5(report: &mut Report, rng: &mut ChaCha8Rng) {
    let f = field();
    let mut bad = 0;
    let mut ok = 0;
    for i in 0..50u64 {
        let n = [4, 8][rng.gen_range(0..2)];
        let d = rng.gen_range(2..=3);
        let m = PolyMatrix::random(f, 2 * n, n, d, rng);
        if let Ok(res) = nullspace_2n(&m, &mut RandomPlan::new(30_000 + i)) {
            ok += 1;
            let first = &res.passes[0];
            if first.kappa != n || first.degrees != vec![d; n] || res.degrees != vec![d; n] {
                bad += 1;
            }
        }
    }
    report.line(
        5,
        "genericity check",
        bad == 0 && ok > 0,
        format!("{ok}/50 successful, {bad} with a first stage other than n vectors of degree d"),
    );
}

fn criterion_6(report: &mut Report, rng: &mut ChaCha8Rng) {
    let f = field();
    let mut bad_residual = 0;
    let mut bad_singular = 0;
    let mut bad_minimal = 0;
    for _ in 0..200 {
        let q = rng.gen_range(1..=6);
        let s = rng.gen_range(1..=3);
        let order = rng.gen_range(1..=40);
        let t = Shift((0..q).map(|_| rng.gen_range(0..=4)).collect());
        let g = PolyMatrix::random(f, q, s, order - 1, rng);
        let sb = sigma_basis(&g, order, &t).unwrap();
        let l = sb.basis();
        let prod = naive_product(l, &g);
        if prod.entries().iter().any(|e| (0..order).any(|k| e.coeff(k) != 0)) {
            bad_residual += 1;
        }
        if naive_rank_at(l, rng.gen_range(0..f.modulus())) != q {
            bad_singular += 1;
        }
        let (_, rows) = sb.select_low_rows(i64::MAX);
        let lowest = sb.tdegs()[rows[0]];
        if approximant_kernel_dimension(&g, order, &t, lowest - 1).unwrap() != 0 {
            bad_minimal += 1;
        }
    }
    report.line(
        6,
        "sigma-basis contract",
        bad_residual + bad_singular + bad_minimal == 0,
        format!(
            "200 instances: {bad_residual} nonzero residuals, {bad_singular} singular at a point, \
             {bad_minimal} with an approximant below the minimal t-degree"
        ),
    );
}

fn criterion_7(report: &mut Report, rng: &mut ChaCha8Rng) {
    let f = field();
    let mut bad = 0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=8);
        let d = rng.gen_range(0..=4);
        let eta = rng.gen_range(1..=64);
        let a = loop {
            let a = PolyMatrix::random(f, n, n, d, rng);
            if naive_rank_at(&a, 0) == n {
                break a;
            }
        };
        let x = series_inverse(&a, eta).unwrap().into_matrix();
        let prod = naive_product(&a, &x);
        let ok =
            (0..n).all(|i| (0..n).all(|j| (0..eta).all(|k| prod.get(i, j).coeff(k) == u64::from(i == j && k == 0))));
        if !ok {
            bad += 1;
        }
    }
    report.line(
        7,
        "series residual",
        bad == 0,
        format!("{bad}/100 residuals nonzero below x^η"),
    );
}

fn criterion_10(report: &mut Report, rng: &mut ChaCha8Rng) {
    let f = field();
    let mut mismatches = 0;
    for _ in 0..100 {
        let (r, k, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6), rng.gen_range(1..=6));
        let a = PolyMatrix::random(f, r, k, rng.gen_range(0..=12), rng);
        let b = PolyMatrix::random(f, k, c, rng.gen_range(0..=12), rng);
        let conv = mul_with(&a, &b, MulStrategy::Convolution).unwrap();
        let eval = mul_with(&a, &b, MulStrategy::EvalInterp).unwrap();
        if conv != eval || conv != naive_product(&a, &b) {
            mismatches += 1;
        }
    }
    let a = PolyMatrix::random(f, 64, 64, 32, rng);
    let b = PolyMatrix::random(f, 64, 64, 32, rng);
    let time = |s: MulStrategy| {
        (0..2)
            .map(|_| {
                let t = Instant::now();
                let out = mul_with(&a, &b, s).unwrap();
                (t.elapsed(), out)
            })
            .min_by_key(|(t, _)| *t)
            .unwrap()
    };
    let (t_conv, conv) = time(MulStrategy::Convolution);
    let (t_eval, eval) = time(MulStrategy::EvalInterp);
    let same = conv == eval;
    report.line(
        10,
        "multiplication crossover",
        mismatches == 0 && same && t_eval < t_conv,
        format!(
            "{mismatches}/100 mismatches; n = 64, d = 32: evaluation {:.1} ms, convolution {:.1} ms, equal: {same}",
            t_eval.as_secs_f64() * 1e3,
            t_conv.as_secs_f64() * 1e3
        ),
    );
}

fn main() {
    let mut report = Report::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    criteria_1_2_4_8_9(&mut report, &mut rng);
    criterion_3(&mut report, &mut rng);
    criterion_5(&mut report, &mut rng);
    criterion_6(&mut report, &mut rng);
    criterion_7(&mut report, &mut rng);
    criterion_10(&mut report, &mut rng);
    if !report.finish() {
        std::process::exit(1);
    }
}
