//! Verification suites behind `verify --suite`. Each returns the printed
//! table and the number of failed rows.

use hypercycle_core::closed_forms::{compare_with_solver, ClosedFormVariant};
use hypercycle_core::oracle::{brute_trace, minor_determinant_check, BruteOptions, MinorParams};
use hypercycle_core::solver::verify_identities;
use hypercycle_core::trace::trace_any;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::Failure;

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "MISMATCH"
    }
}

pub(crate) fn identities(l: Option<u32>) -> Result<(String, usize), Failure> {
    let lengths: Vec<u32> = match l {
        Some(l) => vec![l],
        None => (3..=10).collect(),
    };
    let mut out = format!(
        "{:<4} {:<10} {:>14} {:>14} {:<9} result\n",
        "l", "S=H·B⁻¹", "det S", "expected", "B·B⁻¹=I"
    );
    let mut failed = 0;
    for l in lengths {
        let rep = verify_identities(l)?;
        failed += usize::from(!rep.all_pass());
        out.push_str(&format!(
            "{:<4} {:<10} {:>14} {:>14} {:<9} {}\n",
            l,
            mark(rep.s_vs_h_binv.is_none()),
            rep.det_s,
            rep.det_s_expected,
            mark(rep.b_binv_vs_identity.is_none()),
            verdict(rep.all_pass())
        ));
        if let Some(m) = &rep.s_vs_h_binv {
            out.push_str(&format!(
                "     S({},{}) = {} but (H·B⁻¹) = {}\n",
                m.row, m.col, m.expected, m.actual
            ));
        }
    }
    Ok((out, failed))
}

pub(crate) fn lemma_minors(
    r: Option<u32>,
    l: Option<u32>,
    draws: u32,
    seed: u64,
) -> Result<(String, usize), Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passed = [0u32; 3];
    let mut first_failure: [Option<String>; 3] = [None, None, None];
    for _ in 0..draws {
        let rr = r.unwrap_or_else(|| rng.gen_range(3..=5));
        let s = rng.gen_range(1..=5);
        let len = l.unwrap_or_else(|| rng.gen_range(3..=5));
        let params = [
            MinorParams::Path {
                weights: (0..s).map(|_| rng.gen_range(1..=5)).collect(),
            },
            MinorParams::Cycle {
                weights: (0..len).map(|_| rng.gen_range(1..=5)).collect(),
            },
            MinorParams::OrientedCycle {
                length: len,
                weight: rng.gen_range(1..=5),
            },
        ];
        for (i, p) in params.iter().enumerate() {
            let check = minor_determinant_check(rr, p)?;
            if check.passed() {
                passed[i] += 1;
            } else if first_failure[i].is_none() {
                first_failure[i] = Some(format!(
                    "r={rr} {p:?}: det {} vs closed form {}",
                    check.determinant, check.closed_form
                ));
            }
        }
    }
    let mut out = format!("{:<6} {:>6} {:>6} result\n", "kind", "draws", "exact");
    let mut failed = 0;
    for (i, name) in ["p", "c", "cprime"].iter().enumerate() {
        let ok = passed[i] == draws;
        failed += usize::from(!ok);
        out.push_str(&format!("{:<6} {:>6} {:>6} {}\n", name, draws, passed[i], verdict(ok)));
        if let Some(msg) = &first_failure[i] {
            out.push_str(&format!("       first failure: {msg}\n"));
        }
    }
    Ok((out, failed))
}

pub(crate) fn oracle(
    r: u32,
    l: u32,
    max_order: u64,
    options: &BruteOptions,
) -> Result<(String, usize), Failure> {
    let mut out = format!("# C_{l}^({r}), orders 1..={max_order}\n");
    out.push_str(&format!("{:<6} {:>24} {:>24} result\n", "order", "formula", "brute"));
    let mut failed = 0;
    for order in 1..=max_order {
        let formula = trace_any(r, l, order)?;
        let brute = brute_trace(r, l, order, options)?;
        let ok = formula == brute;
        failed += usize::from(!ok);
        out.push_str(&format!("{:<6} {:>24} {:>24} {}\n", order, formula, brute, verdict(ok)));
    }
    Ok((out, failed))
}

pub(crate) fn closed_forms(r: Option<u32>, l: Option<u32>) -> Result<(String, usize), Failure> {
    let lengths: Vec<u32> = match l {
        Some(l @ (5 | 6)) => vec![l],
        Some(other) => {
            return Err(Failure::Usage(format!(
                "closed-form multiplicities exist for l = 5 and l = 6 only, got {other}"
            )))
        }
        None => vec![5, 6],
    };
    let uniformities: Vec<u32> = match r {
        Some(r) => vec![r],
        None => (3..=12).collect(),
    };
    let describe = |mismatches: &[usize]| -> String {
        if mismatches.is_empty() {
            "ok".to_string()
        } else {
            let names: Vec<String> = mismatches.iter().map(|k| format!("m{k}")).collect();
            format!("differs in {}", names.join(","))
        }
    };
    let mut out = format!("{:<4} {:<4} {:<28} corrected\n", "l", "r", "as printed");
    let (mut failed, mut corrected_failed, mut rows) = (0, 0, 0);
    for &l in &lengths {
        for &r in &uniformities {
            let printed = compare_with_solver(r, l, ClosedFormVariant::Printed)?;
            let corrected = compare_with_solver(r, l, ClosedFormVariant::Corrected)?;
            rows += 1;
            failed += usize::from(!printed.passed());
            corrected_failed += usize::from(!corrected.passed());
            out.push_str(&format!(
                "{:<4} {:<4} {:<28} {}\n",
                l,
                r,
                describe(&printed.mismatches),
                describe(&corrected.mismatches)
            ));
        }
    }
    out.push_str(&format!(
        "closed forms as printed: {} of {rows} match; corrected: {} of {rows} match\n",
        rows - failed,
        rows - corrected_failed
    ));
    Ok((out, failed))
}
