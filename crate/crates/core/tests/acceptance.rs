//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs as a plain binary so the lines appear in order.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use dupsub::blocks::BlockCounter;
use dupsub::codec::{encode, make_params};
use dupsub::eigen::graph_eigenvalue;
use dupsub::gf::FieldElement;
use dupsub::graph::IrrGraph;
use dupsub::oracle::{blocks_by_filter, irreducible_words};
use dupsub::verify::{
    exhaustive_codeword, graph_report, lemma1, reachable_with_one_sub, rs_exhaustive, simulate,
    theorem1,
};
use dupsub::{Result, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        pass,
        detail: detail.into(),
    })
}

fn lemma1_achievability() -> Result<Outcome> {
    let base = Word::parse(4, "012")?;
    let g = lemma1(&base, 13)?;
    let paper = Word::parse(4, "0120103212012")?;
    let reachable = reachable_with_one_sub(&base, &paper, 13);
    let paper_root = paper.root().len();
    outcome(
        g.max_root_len == 13 && reachable && paper_root == 13,
        format!(
            "max={} witness={} paper witness reachable={reachable} root length {paper_root}",
            g.max_root_len, g.witness
        ),
    )
}

fn lemma1_bound() -> Result<Outcome> {
    let g = lemma1(&Word::parse(6, "01234")?, 13)?;
    outcome(
        g.max_root_len <= 17,
        format!(
            "base 01234 cap 13: max={} witness={}",
            g.max_root_len, g.witness
        ),
    )
}

fn theorem1_window() -> Result<Outcome> {
    let r = theorem1(10_000, 4, 30, 8, 17, 0x5eed)?;
    outcome(
        r.violations.is_empty(),
        format!(
            "{} trials, max |β|={} max |β'|={}, {} over 17",
            r.trials,
            r.max_removed,
            r.max_inserted,
            r.violations.len()
        ),
    )
}

fn eigenvalues() -> Result<Outcome> {
    let graph = IrrGraph::build(4)?;
    let sigma = Word::parse(4, "01201")?;
    let marked = graph_eigenvalue(&graph, Some(&sigma))?;
    let full = graph_eigenvalue(&graph, None)?;
    let (ls, lf) = (marked.value.log2(), full.value.log2());
    let pass = (marked.value - 2.6534).abs() <= 5e-4
        && (full.value - 2.6590).abs() <= 5e-4
        && (ls - 1.4078).abs() <= 1e-3
        && (lf - 1.4109).abs() <= 1e-3
        && (lf - ls - 0.003).abs() <= 1e-3
        && marked.primitivity.is_primitive()
        && full.primitivity.is_primitive();
    outcome(
        pass,
        format!(
            "λ_σ={:.6} λ={:.6} log2: {ls:.5}/{lf:.5} gap {:.5}",
            marked.value,
            full.value,
            lf - ls
        ),
    )
}

fn block_correspondence() -> Result<Outcome> {
    let mut checked = 0usize;
    let mut mismatches = Vec::new();
    for q in [3u8, 4] {
        let graph = Arc::new(IrrGraph::build(q)?);
        for s in irreducible_words(q, 5) {
            let sigma = Word::new(q, s)?;
            for m in 1..=8 {
                let bc = BlockCounter::new(graph.clone(), &sigma, m)?;
                let brute = blocks_by_filter(&sigma, m);
                let same_count = *bc.count() == brute.len().into();
                let same_set = same_count
                    && brute.iter().enumerate().all(|(i, b)| {
                        bc.unrank_u64(i as u64)
                            .map(|w| w.symbols() == &b[..])
                            .unwrap_or(false)
                    });
                checked += 1;
                if !same_set {
                    mismatches.push(format!("q={q} σ={sigma} m={m}"));
                }
            }
        }
    }
    outcome(
        mismatches.is_empty(),
        format!("{checked} (q, σ, m) cases, mismatches: {mismatches:?}"),
    )
}

fn out_degrees() -> Result<Outcome> {
    let mut details = Vec::new();
    let mut pass = true;
    for q in [3u8, 4, 5] {
        let r = graph_report(q, "01020", 1)?;
        pass &= r.degree_mismatches.is_empty();
        details.push(format!(
            "q={q}: {} vertices, {} mismatches",
            r.vertices,
            r.degree_mismatches.len()
        ));
    }
    outcome(pass, details.join("; "))
}

fn growth_bound() -> Result<Outcome> {
    let mut details = Vec::new();
    let mut pass = true;
    for q in [3u8, 4, 5] {
        let r = graph_report(q, "01020", 40)?;
        pass &= r.reaches_marker && r.bound_failures.is_empty();
        let failing: Vec<String> = r
            .bound_failures
            .iter()
            .map(|&m| format!("M({m})={}", r.counts[m - 1]))
            .collect();
        details.push(format!(
            "q={q}: reaches={} c={:?} bound fails at [{}]",
            r.reaches_marker,
            r.c,
            failing.join(", ")
        ));
    }
    outcome(pass, details.join("; "))
}

fn outer_code() -> Result<Outcome> {
    let r = rs_exhaustive(3)?;
    outcome(
        r.min_distance == 5
            && r.error_failures == 0
            && r.erasure_failures == 0
            && r.syndrome_mismatches == 0,
        format!(
            "d_min={} errors {}/{} failed, erasures {}/{} failed, syndrome mismatches {}",
            r.min_distance,
            r.error_failures,
            r.error_patterns,
            r.erasure_failures,
            r.erasure_patterns,
            r.syndrome_mismatches
        ),
    )
}

fn monte_carlo() -> Result<Outcome> {
    let params = make_params(4, &Word::parse(4, "01201")?, 18, 4)?;
    let r = simulate(&params, 10_000, 20, true, 0xC0DE)?;
    let first = r
        .failures
        .first()
        .map(|f| format!(" first failure trial {}: {}\n{}", f.trial, f.error, f.trace))
        .unwrap_or_default();
    outcome(
        r.failures.is_empty() && params.codeword_len() == 340,
        format!(
            "n={} {}/{} recovered{first}",
            params.codeword_len(),
            r.successes,
            r.trials
        ),
    )
}

fn exhaustive_small() -> Result<Outcome> {
    // Duplication cap 2 fits the runtime budget, so it is not reduced.
    let params = make_params(4, &Word::parse(4, "01201")?, 18, 3)?;
    let field = params.outer_code().field();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut roots, mut failures, mut ball) = (0, 0, 0);
    for _ in 0..10 {
        let message: Vec<FieldElement> = (0..params.message_len())
            .map(|_| field.element(rng.gen_range(0..field.size() as u32)))
            .collect::<Result<_>>()?;
        let x = encode(&params, &message)?;
        let r = exhaustive_codeword(&params, &x, &message, 2);
        roots += r.distinct_roots;
        failures += r.failures.len();
        ball += r.descendants;
    }
    outcome(
        failures == 0,
        format!(
            "10 codewords, {ball} duplication descendants, {roots} distinct output roots, {failures} failures"
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<Outcome>); 10] = [
        ("lemma 1 achievability", lemma1_achievability),
        ("lemma 1 bound consistency", lemma1_bound),
        ("theorem 1 window", theorem1_window),
        ("eigenvalues and rates", eigenvalues),
        ("block count correspondence", block_correspondence),
        ("out-degree formula", out_degrees),
        ("marker reachability and growth bound", growth_bound),
        ("outer code exhaustive", outer_code),
        ("end-to-end monte carlo", monte_carlo),
        ("end-to-end exhaustive", exhaustive_small),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match run() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} ({name}, {:.1}s): {detail}",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
