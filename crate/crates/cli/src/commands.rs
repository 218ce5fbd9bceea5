use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use fujita_core::bundles::BaseVariety;
use fujita_core::fujita::{confn, lower_bound_witness, upper_witness_d_equiv_1};
use fujita_core::nslattice::RationalClass;
use fujita_core::oracle::Suite;
use fujita_core::positivity::{
    adjoint_pushforward, analyze_critical_case, cone_product_map, find_zero_sum_partition, partition_theta,
    pe_is_ample_csst, pe_is_ample_curve, pe_is_nef_csst, pe_is_nef_curve, slope_gg_curve, Criticality, PeClass, SlopeGg,
    EXHAUSTIVE_CAP,
};
use fujita_core::scalar::parse_q;
use fujita_core::{Rational, Ternary};

use crate::descriptor::read_descriptor;
use crate::envelope::{
    class_json, show_q, CriticalJson, Outcome, PeJson, ProductJson, QJson, ResultEnvelope, SplitJson, Status,
    WitnessJson,
};

/// Search bound for splitting `Θ` as a sum of two ample classes.
pub const DEFAULT_SPLIT_BOUND: u64 = 6;

pub struct Report {
    pub envelope: ResultEnvelope,
    pub status: Status,
}

fn input_of(path: &Path) -> Option<String> {
    Some(path.display().to_string())
}

fn show_class(c: &RationalClass<i64>) -> String {
    c.to_string()
}

pub fn cmd_confn(path: &Path) -> Result<Report> {
    let d = read_descriptor(path)?;
    let v = confn(&d.base, &d.bundle)?;
    let mut env = ResultEnvelope::new(
        "confn",
        input_of(path),
        Outcome::Verdict {
            rank: v.rank,
            lower: v.lower,
            upper: v.upper,
            exact: v.exact,
            unresolved: v.unresolved.clone(),
        },
    );
    env.row("base", d.base.kind());
    env.row("rank", v.rank.to_string());
    match v.exact {
        Some(x) => env.row("conFN(P(E))", x.to_string()),
        None => env.row("conFN(P(E))", format!("in [{}, {}]", v.lower, v.upper)),
    }
    if !v.unresolved.is_empty() {
        let names: Vec<&str> = v.unresolved.iter().map(|h| h.as_str()).collect();
        env.row("unresolved", names.join(", "));
        env.warnings.push("verdict is an interval; the listed hypotheses would decide it".into());
    }
    if d.twists.is_some() {
        env.warnings.push("twists are ignored by confn".into());
    }
    if let BaseVariety::Curve { genus: 1, .. } = d.base {
        env.warnings.push("genus 1 is decided as a one-dimensional abelian variety".into());
    }
    if let Some(w) = &v.witness {
        env.row("witness", w.note.clone());
        env.witness = Some(WitnessJson::from(w));
    }
    if let Some(w) = &v.lower_witness {
        env.row("lower bound", w.note.clone());
    }
    env.citations = v.criteria.iter().map(|c| c.id().to_string()).collect();
    let status = if v.is_exact() { Status::Exact } else { Status::Open };
    Ok(Report { envelope: env, status })
}

/// Comma-separated rationals, e.g. `2` or `1/2,-3`.
pub fn parse_class(s: &str) -> Result<RationalClass<i64>> {
    let coords = s
        .split(',')
        .map(|p| parse_q::<i64>(p).ok_or_else(|| anyhow!("expected an integer or p/q, got {p:?}")))
        .collect::<Result<Vec<_>>>()?;
    Ok(RationalClass::new(coords))
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    parse_q(s).ok_or_else(|| anyhow!("expected an integer or p/q, got {s:?}"))
}

pub enum ConeClass {
    Explicit { m: RationalClass<i64>, a: Rational },
    /// `r·λ_E`.
    ScaledLambda,
}

pub fn cmd_cone_test(path: &Path, class: ConeClass) -> Result<Report> {
    let d = read_descriptor(path)?;
    if d.twists.is_some() {
        bail!("cone-test: the class is given on the command line; remove the [[twists]] tables");
    }
    let e = &d.bundle;
    let l = match class {
        ConeClass::Explicit { m, a } => PeClass::new(m, a),
        ConeClass::ScaledLambda => PeClass::lambda(e).scale(&e.rank_q()),
    };
    l.m.check_len(d.base.ns().rank()).context("class m")?;
    let csst = if e.curve_semistable {
        Some((pe_is_nef_csst(&l, e, &d.base)?, pe_is_ample_csst(&l, e, &d.base)?))
    } else {
        None
    };
    let curve = if d.base.is_curve() { Some((pe_is_nef_curve(&l, e)?, pe_is_ample_curve(&l, e)?)) } else { None };
    if csst.is_none() && curve.is_none() {
        bail!(
            "cone-test: no criterion applies; off a curve the P(E) cone is only known for curve semistable E \
             (set bundle.curve_semistable = true if it holds)"
        );
    }
    let product = csst.map(|_| cone_product_map(&l, e));
    let mut env = ResultEnvelope::new(
        "cone-test",
        input_of(path),
        Outcome::Cone {
            class: PeJson::from(&l),
            nef_csst: csst.map(|c| c.0),
            ample_csst: csst.map(|c| c.1),
            nef_curve: curve.map(|c| c.0),
            ample_curve: curve.map(|c| c.1),
            product_image: product.as_ref().map(|(x, a)| ProductJson { x: class_json(x), a: QJson::from(a) }),
        },
    );
    env.row("class", format!("π*M(a), M = {}, a = {}", show_class(&l.m), show_q(&l.a)));
    if let Some((nef, ample)) = csst {
        env.row("nef (cone criterion)", nef.to_string());
        env.row("ample (cone criterion)", ample.to_string());
        env.citations.push("pe-cone.curve-semistable".into());
    }
    if let Some((nef, ample)) = curve {
        env.row("nef (minimal slope)", nef.to_string());
        env.row("ample (minimal slope)", ample.to_string());
        env.citations.push("pe-cone.minimal-slope".into());
    }
    if let Some((x, a)) = &product {
        env.row("image in Nef(S) × R", format!("({}, {})", show_class(x), show_q(a)));
    }
    Ok(Report { envelope: env, status: Status::Exact })
}

fn criticality_name(c: Criticality) -> &'static str {
    match c {
        Criticality::Critical => "critical",
        Criticality::NotCritical => "not_critical",
        Criticality::Unknown => "unknown",
    }
}

pub fn cmd_pushforward(path: &Path, split_bound: u64) -> Result<Report> {
    let d = read_descriptor(path)?;
    let twists = d.twists.as_ref().ok_or_else(|| anyhow!("pushforward: the descriptor needs [[twists]]"))?;
    let e = &d.bundle;
    let f = adjoint_pushforward(e, twists, &d.base)?;
    let slope_criterion = f.mu_minus.as_ref().map(|_| slope_gg_curve(&f)).transpose()?;
    let bound = u32::try_from(split_bound).context("--bound")?;
    let critical = if e.curve_semistable && twists.len() >= e.rank as usize {
        Some(analyze_critical_case(e, twists, &d.base, bound)?)
    } else {
        None
    };
    let split = if e.curve_semistable { partition_theta(e, twists, &d.base)? } else { None };

    let mut env = ResultEnvelope::new(
        "pushforward",
        input_of(path),
        Outcome::Pushforward {
            rank: f.rank,
            slope: class_json(&f.slope),
            mu_minus: f.mu_minus.as_ref().map(QJson::from),
            sym_power: f.sym_power,
            slope_criterion: slope_criterion.map(|s| match s {
                SlopeGg::GloballyGenerated => "globally_generated".to_string(),
                SlopeGg::Inconclusive => "inconclusive".to_string(),
            }),
            critical: critical.as_ref().map(|c| CriticalJson {
                denominator_is_rank: c.denominator_is_rank,
                congruent_coprime: c.congruent_coprime,
                theta: c.theta.as_ref().map(class_json),
                theta_splits: c.theta_splits.map(|t| t.to_string()),
                verdict: criticality_name(c.verdict).to_string(),
            }),
            split: split.as_ref().map(|p| SplitJson {
                indices: p.block.indices.clone(),
                modulus: p.modulus,
                theta: class_json(&p.theta),
                remainder: class_json(&p.remainder),
                theta_ample: p.theta_ample,
                remainder_ample: p.remainder_ample,
            }),
        },
    );
    env.row("F", format!("Sym^{}(E) ⊗ det(E) ⊗ M", f.sym_power));
    env.row("rank F", f.rank.to_string());
    env.row("μ(F)", show_class(&f.slope));
    if let Some(mu) = &f.mu_minus {
        env.row("μ⁻(F)", show_q(mu));
    }
    let mut status = Status::Exact;
    if let Some(s) = slope_criterion {
        match s {
            SlopeGg::GloballyGenerated => env.row("ω_C ⊗ F", "globally generated (μ⁻(F) > 1)"),
            SlopeGg::Inconclusive => {
                env.row("ω_C ⊗ F", "inconclusive (μ⁻(F) ≤ 1)");
                status = Status::Open;
            }
        }
        env.citations.push("pushforward.minimal-slope-gg".into());
    }
    if let Some(c) = &critical {
        env.row("critical case", criticality_name(c.verdict));
        if let Some(theta) = &c.theta {
            env.row("Θ", show_class(theta));
        }
        if c.theta_splits == Some(Ternary::Unknown) {
            env.warnings.push(format!("Θ splitting undecided within search bound {bound}"));
        }
        env.citations.push("pushforward.critical-case".into());
    }
    if let Some(p) = &split {
        env.row("zero-sum block", format!("{:?} mod {}", p.block.indices, p.modulus));
        env.row("Θ_I", show_class(&p.theta));
        env.row("μ(F(−Θ_I))", show_class(&p.remainder));
        env.citations.push("pushforward.zero-sum-block".into());
    }
    Ok(Report { envelope: env, status })
}

pub fn cmd_partition(values: &[u64], modulus: u64) -> Result<Report> {
    if modulus == 0 {
        bail!("partition: modulus must be positive");
    }
    let found = find_zero_sum_partition(values, modulus);
    let t = values.len();
    // below the pigeonhole range the finder only searches up to the cap
    let decided = found.is_some() || (t as u64) >= modulus || t <= EXHAUSTIVE_CAP;
    let mut env = ResultEnvelope::new(
        "partition",
        None,
        Outcome::Partition {
            modulus,
            values: values.to_vec(),
            decided,
            indices: found.as_ref().map(|s| s.indices.clone()),
            route: found.as_ref().map(|s| format!("{:?}", s.route)),
        },
    );
    env.row("values", format!("{values:?}"));
    env.row("modulus", modulus.to_string());
    match &found {
        Some(s) => {
            let picked: Vec<u64> = s.indices.iter().map(|&i| values[i]).collect();
            env.row("indices", format!("{:?}", s.indices));
            env.row("entries", format!("{picked:?} (sum {})", picked.iter().sum::<u64>()));
            env.row("route", format!("{:?}", s.route));
        }
        None if decided => env.row("result", "no nonempty proper zero-sum subset"),
        None => env.row("result", "undecided (too long for the direct search)"),
    }
    env.citations.push("partition.pigeonhole".into());
    Ok(Report { envelope: env, status: if decided { Status::Exact } else { Status::Open } })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessSelection {
    Lower,
    Upper,
    All,
}

pub fn cmd_witness(path: &Path, which: WitnessSelection, m: Option<RationalClass<i64>>) -> Result<Report> {
    let d = read_descriptor(path)?;
    let e = &d.bundle;
    let want_lower = which != WitnessSelection::Upper;
    let want_upper = which != WitnessSelection::Lower;
    let lower = if want_lower { Some(lower_bound_witness(e, &d.base, m)?) } else { None };
    let upper = if want_upper {
        let applicable = match (&d.base, e.curve_degree()) {
            (BaseVariety::Curve { genus, .. }, Ok(deg)) if *genus >= 1 && e.curve_semistable => {
                Some((*genus, deg))
            }
            _ => None,
        };
        match applicable {
            Some((g, deg)) if (deg - 1).rem_euclid(i64::from(e.rank)) == 0 => Some(upper_witness_d_equiv_1(g, e.rank, deg)?),
            _ if which == WitnessSelection::Upper => {
                bail!("witness: the base point witness needs a semistable bundle on a curve of genus ≥ 1 with d ≡ 1 (mod r)")
            }
            _ => None,
        }
    } else {
        None
    };
    let mut env = ResultEnvelope::new(
        "witness",
        input_of(path),
        Outcome::Witnesses { lower: lower.as_ref().map(WitnessJson::from), upper: upper.as_ref().map(WitnessJson::from) },
    );
    if let Some(w) = &lower {
        env.row("lower bound twists", format!("{} × (M = {}, a = 1)", w.twists.len(), show_class(&w.twists.twists[0].m)));
        env.row("lower bound adjoint", format!("({}, {})", show_class(&w.adjoint_class.m), show_q(&w.adjoint_class.a)));
        env.row("fiber degree", w.fiber_degree.to_string());
        env.citations.push("fiber-lower-bound".into());
    }
    if let Some(w) = &upper {
        env.row("base point twists", format!("{} × (M = {}, a = 1)", w.twists.len(), show_class(&w.twists.twists[0].m)));
        env.row("base point adjoint", format!("({}, {})", show_class(&w.adjoint_class.m), show_q(&w.adjoint_class.a)));
        if let Some(s) = &w.pushforward_slope {
            env.row("μ(F)", show_class(s));
        }
        env.citations.push("curve.degree-one-mod-rank".into());
        env.witness = Some(WitnessJson::from(w));
    }
    Ok(Report { envelope: env, status: Status::Exact })
}

pub fn cmd_verify(suite: &str, seed: u64, bound: Option<u64>) -> Result<Report> {
    let suite_kind = Suite::parse(suite)?;
    let reports = suite_kind.run(seed, bound)?;
    let passed = reports.iter().all(|r| r.passed());
    let mut env = ResultEnvelope::new("verify", None, Outcome::Oracle { passed, reports: reports.clone() });
    for r in &reports {
        env.row(
            &r.suite,
            format!("{} checked, {} mismatches, {} µs", r.checked, r.mismatches.len(), r.elapsed.as_micros()),
        );
        for m in r.mismatches.iter().take(5) {
            env.row("  mismatch", format!("{} expected {} got {}", m.input, m.expected, m.got));
        }
    }
    env.row("seed", seed.to_string());
    env.row("result", if passed { "pass" } else { "FAIL" });
    env.citations.push(format!("oracle.{suite}"));
    Ok(Report { envelope: env, status: if passed { Status::Exact } else { Status::Error } })
}
