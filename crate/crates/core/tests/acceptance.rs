//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wp_curvature::agreement::{beta_agreement, form_agreement, resolvent_agreement};
use wp_curvature::spectral::{
    holomorphic_sectional_trend, lambda_min_monotone, noncompactness_evidence, summarize, SpectrumSummary,
};
use wp_curvature::tensor::{compute_block, compute_tuples, diagonal_pair_tuples, TensorCache, TensorComputer};
use wp_curvature::verification::{
    contraction_suite, harnack_suite, kernel_probes, lower_bound_suite, orthonormality, resolvent_identities,
};
use wp_curvature::wedge::assemble_matrix;
use wp_curvature::Result;

struct Outcome {
    pass: bool,
    detail: String,
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn spectra(cache: &TensorCache, ns: std::ops::RangeInclusive<usize>) -> Result<Vec<SpectrumSummary>> {
    ns.map(|n| summarize(&assemble_matrix(n, cache)?, 1e-9, 1e-7)).collect()
}

fn orthonormal_basis() -> Result<Outcome> {
    let g = orthonormality(1, 13)?;
    Ok(Outcome { pass: g.pass, detail: format!("max |G - I| = {:.2e}", g.max_deviation) })
}

fn resolvent_identities_hold() -> Result<Outcome> {
    let r = resolvent_identities(50, &mut ChaCha8Rng::seed_from_u64(2))?;
    Ok(Outcome {
        pass: r.pass,
        detail: format!(
            "|D(1)-1| = {:.1e}, |mass-1| = {:.1e}, self-adjoint residual = {:.1e} over {} pairs",
            r.constant_error, r.unit_mass_error, r.max_self_adjoint_residual, r.pairs
        ),
    })
}

fn contraction_and_lower_bound() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let c = contraction_suite(100, &mut rng)?;
    let l = lower_bound_suite(20, &mut rng)?;
    Ok(Outcome {
        pass: c.pass && l.pass,
        detail: format!(
            "min <Df,f> = {:.2e}, max <Df,f> - |f|^2 = {:.2e}; min D|mu|^2/|mu|^2 = {:.6} over {}x{} points",
            c.min_lhs, c.max_excess, l.worst_ratio, l.forms, l.points_per_form
        ),
    })
}

fn harnack() -> Result<Outcome> {
    let h = harnack_suite(100, &mut ChaCha8Rng::seed_from_u64(4))?;
    Ok(Outcome {
        pass: h.pass,
        detail: format!("max excess = {:.2e}, equality gap at mu_1 = {:.1e}", h.max_excess, h.equality_gap),
    })
}

fn nonpositive(cache: &TensorCache) -> Result<Outcome> {
    let s = spectra(cache, 2..=4)?;
    let worst = s.iter().map(|x| x.lambda_max).fold(f64::NEG_INFINITY, f64::max);
    Ok(Outcome { pass: s.iter().all(|x| x.nonpositive.pass), detail: format!("largest eigenvalue over n=2..4: {worst:.2e}") })
}

fn kernel(cache: &TensorCache) -> Result<Outcome> {
    let s = spectra(cache, 2..=4)?;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let probes = (2..=4).map(|n| kernel_probes(n, 20, cache, &mut rng)).collect::<Result<Vec<_>>>()?;
    let dims: Vec<String> = s.iter().map(|x| format!("{}/{}", x.kernel.dimension, x.kernel.expected)).collect();
    let gap = s.iter().filter_map(|x| x.kernel.gap).fold(f64::INFINITY, f64::min);
    let probe = probes.iter().map(|p| p.max_abs_form).fold(0.0, f64::max);
    Ok(Outcome {
        pass: s.iter().all(|x| x.kernel.pass) && probes.iter().all(|p| p.pass),
        detail: format!("dims {} (n=2..4), nearest nonzero |lambda| = {gap:.2e}, max |Q(C,C)| = {probe:.1e}", dims.join(", ")),
    })
}

fn bound(cache: &TensorCache) -> Result<Outcome> {
    let s = spectra(cache, 1..=cache.truncation)?;
    let mins: Vec<String> = s.iter().map(|x| format!("{:.4}", x.bound.abs_lambda_min)).collect();
    Ok(Outcome {
        pass: s.iter().all(|x| x.bound.pass) && lambda_min_monotone(&s),
        detail: format!("|lambda_min| for n=1..{}: [{}] <= {:.3}", s.len(), mins.join(", "), s[0].bound.bound),
    })
}

fn noncompactness() -> Result<Outcome> {
    let mut cache = TensorCache::new(31);
    compute_tuples(&diagonal_pair_tuples(31), &mut cache, &TensorComputer::default(), 0).map_err(|f| f.first_error)?;
    let r = noncompactness_evidence(4, &cache)?;
    let min = r.vectors.iter().map(|v| v.neg_q).fold(f64::INFINITY, f64::min);
    let traces = r.projections.iter().map(|p| (p.trace - p.diagonal_sum).abs()).fold(0.0, f64::max);
    Ok(Outcome {
        pass: r.pass,
        detail: format!(
            "min -Q(A_i,A_i) over i=0..4 = {min:.4}, trace defect = {traces:.1e}, {} projections in range",
            r.projections.len()
        ),
    })
}

fn exact_beta() -> Result<Outcome> {
    let b = beta_agreement(1000)?;
    Ok(Outcome { pass: b.pass && b.checked == 1000, detail: format!("{} values of m, {} failures", b.checked, b.failures.len()) })
}

fn oracle_equivalence() -> Result<Outcome> {
    let r = resolvent_agreement(10)?;
    let f = form_agreement(3, 20, &mut ChaCha8Rng::seed_from_u64(10))?;
    Ok(Outcome {
        pass: r.pass && f.pass && r.cases.len() == 10 && f.cases.len() == 20,
        detail: format!(
            "resolvent routes differ by {:.1e} on {} inputs; form vs direct by {:.1e} on {} vectors",
            r.max_difference,
            r.cases.len(),
            f.max_difference,
            f.cases.len()
        ),
    })
}

fn trend() -> Result<Outcome> {
    let mut cache = TensorCache::new(12);
    let tuples: Vec<_> = (1..=12).map(|k| [k, k, k, k]).collect();
    compute_tuples(&tuples, &mut cache, &TensorComputer::default(), 0).map_err(|f| f.first_error)?;
    let t = holomorphic_sectional_trend(12, &cache)?;
    Ok(Outcome {
        pass: t.pass(),
        detail: format!("2T[n,n,n,n]: {:.4e} .. {:.4e}", t.values[0], t.values[11]),
    })
}

fn main() -> ExitCode {
    let mut block = TensorCache::new(6);
    let block_time = Instant::now();
    if let Err(f) = compute_block(6, &mut block, &TensorComputer::default(), 0) {
        println!("FAIL  tensor block for n <= 6: {f}");
        return ExitCode::FAILURE;
    }
    let block_time = block_time.elapsed();

    type Check<'a> = Box<dyn Fn() -> Result<Outcome> + 'a>;
    let criteria: Vec<(&str, Duration, Check)> = vec![
        ("1 orthonormal basis", secs(1), Box::new(orthonormal_basis)),
        ("2 resolvent identities", secs(30), Box::new(resolvent_identities_hold)),
        ("3 contraction and lower bound", secs(120), Box::new(contraction_and_lower_bound)),
        ("4 harnack inequality", secs(10), Box::new(harnack)),
        ("5 non-positivity", secs(600), Box::new(|| nonpositive(&block))),
        ("6 kernel dimension", secs(600), Box::new(|| kernel(&block))),
        ("7 uniform bound", secs(600), Box::new(|| bound(&block))),
        ("8 noncompactness evidence", secs(900), Box::new(noncompactness)),
        ("9 exact beta inequality", secs(1), Box::new(exact_beta)),
        ("10 oracle equivalence", secs(600), Box::new(oracle_equivalence)),
        ("11 sectional trend", secs(60), Box::new(trend)),
    ];

    let mut failed = 0;
    for (name, budget, check) in &criteria {
        let start = Instant::now();
        let result = check();
        let mut elapsed = start.elapsed();
        if name.starts_with('5') || name.starts_with('6') || name.starts_with('7') {
            elapsed += block_time;
        }
        let (pass, detail) = match result {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let in_time = elapsed <= *budget;
        let ok = pass && in_time;
        failed += usize::from(!ok);
        let timing = if in_time { String::new() } else { format!(" [over budget {budget:?}]") };
        println!("{}  {name}: {detail} ({:.2}s){timing}", if ok { "PASS" } else { "FAIL" }, elapsed.as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
