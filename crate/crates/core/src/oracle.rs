//! Brute-force cross-checks. Each oracle recomputes its expectation from raw
//! integer conditions and never reuses the arithmetic of the code it checks.

use std::fmt::Debug;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::bundles::{
    chern_character_terms, csst_c2_pairing, discriminant, discriminant_from_ch, BaseVariety, BundleDescriptor,
    HnData,
};
use crate::error::{Error, Result};
use crate::fujita::{confn_pe_curve, lower_bound_witness, upper_witness_d_equiv_1, WitnessKind};
use crate::nslattice::{NsModel, RationalClass};
use crate::positivity::{
    detect_critical_case, find_zero_sum_partition, pe_is_ample_csst, pe_is_ample_curve, pe_is_nef_csst,
    pe_is_nef_curve, theta_for_critical, Criticality, PeClass, Twist, TwistFamily,
};
use crate::ternary::Ternary;

pub const DEFAULT_SEED: u64 = 0x5eed_f00d;

/// Largest input the exhaustive subset oracle accepts.
pub const SUBSET_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub input: String,
    pub expected: String,
    pub got: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub suite: String,
    pub checked: u64,
    pub mismatches: Vec<Mismatch>,
    #[serde(rename = "elapsed_us", serialize_with = "as_micros")]
    pub elapsed: Duration,
    pub seed: Option<u64>,
}

fn as_micros<S: Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(d.as_micros() as u64)
}

impl OracleReport {
    fn start(suite: &str, seed: Option<u64>) -> (Self, Instant) {
        let report = Self { suite: suite.to_string(), checked: 0, mismatches: Vec::new(), elapsed: Duration::ZERO, seed };
        (report, Instant::now())
    }

    fn finish(mut self, started: Instant) -> Self {
        self.elapsed = started.elapsed();
        self
    }

    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    fn check(&mut self, ok: bool, input: impl Debug, expected: impl Debug, got: impl Debug) {
        self.checked += 1;
        if !ok {
            self.mismatches.push(Mismatch {
                input: format!("{input:?}"),
                expected: format!("{expected:?}"),
                got: format!("{got:?}"),
            });
        }
    }

    fn absorb(&mut self, other: OracleReport) {
        self.checked += other.checked;
        self.mismatches.extend(other.mismatches);
    }
}

fn gcd_raw(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Exhaustive search over the `2^t − 2` nonempty proper subsets.
fn subset_exists(residues: &[u64], r: u64) -> bool {
    let t = residues.len();
    (1u32..(1u32 << t).saturating_sub(1)).any(|mask| {
        (0..t).filter(|i| mask >> i & 1 == 1).map(|i| residues[i]).sum::<u64>() % r == 0
    })
}

fn check_finder(report: &mut OracleReport, a_list: &[u64], r: u64, exists: bool) {
    let t = a_list.len();
    let found = find_zero_sum_partition(a_list, r);
    let got = found.as_ref().map(|s| s.indices.clone());
    match &found {
        Some(s) => {
            let mut seen = vec![false; t];
            let distinct = s.indices.iter().all(|&i| i < t && !std::mem::replace(&mut seen[i], true));
            let proper = !s.indices.is_empty() && s.indices.len() < t;
            let zero = distinct && s.indices.iter().map(|&i| a_list[i]).sum::<u64>() % r == 0;
            report.check(distinct && proper && zero, (a_list, r), "valid zero-sum subset", &got);
        }
        None => report.check(!exists, (a_list, r), "subset exists", &got),
    }
    report.check(t as u64 <= r || exists, (a_list, r), "existence for t > r", exists);
}

/// Confirms the finder's subset and the pigeonhole guarantee for `t > r`.
pub fn subset_sum_oracle(a_list: &[u64], r: u64) -> Result<OracleReport> {
    if a_list.len() > SUBSET_CAP {
        return Err(Error::SizeCap(format!("subset oracle handles t ≤ {SUBSET_CAP}, got t = {}", a_list.len())));
    }
    if r == 0 {
        return Err(Error::Precondition("modulus must be positive".into()));
    }
    let (mut report, started) = OracleReport::start("partition", None);
    let residues: Vec<u64> = a_list.iter().map(|a| a % r).collect();
    check_finder(&mut report, a_list, r, subset_exists(&residues, r));
    Ok(report.finish(started))
}

/// Random sequences with `t = r + 1 ≤ t_max` and entries in `[1, 2r]`.
pub fn subset_sum_batch(seed: u64, cases: usize, t_max: usize) -> Result<OracleReport> {
    if t_max > SUBSET_CAP {
        return Err(Error::SizeCap(format!("subset oracle handles t ≤ {SUBSET_CAP}, got t = {t_max}")));
    }
    if t_max < 2 {
        return Err(Error::Precondition("need t ≥ 2".into()));
    }
    let (mut report, started) = OracleReport::start("partition", Some(seed));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..cases {
        let r = rng.gen_range(1..t_max as u64);
        let a: Vec<u64> = (0..=r).map(|_| rng.gen_range(1..=2 * r)).collect();
        report.absorb(subset_sum_oracle(&a, r)?);
    }
    Ok(report.finish(started))
}

/// Every sequence with `t = r + 1 ≤ t_max` and entries in `[1, 2r]`. The
/// exhaustive answer depends only on residues, so it is cached per residue
/// vector; the finder runs on every sequence.
pub fn pigeonhole_sweep(t_max: usize) -> Result<OracleReport> {
    if t_max > 8 {
        return Err(Error::SizeCap(format!("full sweep handles t ≤ 8, got t = {t_max}")));
    }
    let (mut report, started) = OracleReport::start("partition-sweep", None);
    for t in 2..=t_max {
        let r = (t - 1) as u64;
        let mut cache: Vec<u8> = vec![0; (r as usize).pow(t as u32)];
        let mut a = vec![1u64; t];
        loop {
            let key = a.iter().fold(0usize, |k, &x| k * r as usize + (x % r) as usize);
            if cache[key] == 0 {
                let residues: Vec<u64> = a.iter().map(|x| x % r).collect();
                cache[key] = if subset_exists(&residues, r) { 1 } else { 2 };
            }
            check_finder(&mut report, &a, r, cache[key] == 1);
            // odometer over [1, 2r]^t
            let mut pos = 0;
            while pos < t && a[pos] == 2 * r {
                a[pos] = 1;
                pos += 1;
            }
            if pos == t {
                break;
            }
            a[pos] += 1;
        }
    }
    Ok(report.finish(started))
}

/// Butler and the csst criterion on semistable `(r, d)` over a genus 2 curve,
/// against `a > 0 ∧ r·m + a·d > 0` (ample) and the closed variant (nef).
pub fn cone_agreement_oracle(
    r_max: u32,
    d_range: (i64, i64),
    m_range: (i64, i64),
    a_range: (i64, i64),
) -> Result<OracleReport> {
    let (mut report, started) = OracleReport::start("cones", None);
    let base = BaseVariety::<i64>::curve(2);
    for r in 1..=r_max {
        for d in d_range.0..=d_range.1 {
            let e = BundleDescriptor::semistable_on_curve(r, d);
            for m in m_range.0..=m_range.1 {
                for a in a_range.0..=a_range.1 {
                    let l = PeClass::twist(RationalClass::from_i64s(&[m]), a);
                    let value = i64::from(r) * m + a * d;
                    let raw = (a > 0 && value > 0, a >= 0 && value >= 0);
                    let butler = (pe_is_ample_curve(&l, &e)?, pe_is_nef_curve(&l, &e)?);
                    let csst = (pe_is_ample_csst(&l, &e, &base)?, pe_is_nef_csst(&l, &e, &base)?);
                    report.check(
                        butler == raw && csst == raw,
                        (r, d, m, a),
                        raw,
                        format!("butler {butler:?}, csst {csst:?}"),
                    );
                }
            }
        }
    }
    Ok(report.finish(started))
}

/// Expected `(lower, upper)` for a curve of genus ≥ 2, straight from the
/// gcd/congruence/flag table.
fn curve_table(r: i64, d: i64, semistable: bool, sym: Ternary) -> (i64, i64) {
    if !semistable || gcd_raw(r, d) != 1 {
        (r, r)
    } else if (d - 1).rem_euclid(r) == 0 {
        (r + 1, r + 1)
    } else if sym == Ternary::Yes {
        (r, r)
    } else {
        (r, r + 1)
    }
}

/// Verdicts over genus `g ≥ 2` for semistable `(r, d)` and for the unstable
/// bundle with HN quotients `(1, d − (r−1)q)`, `(r−1, (r−1)q)`,
/// `q = ⌊(d−1)/r⌋`, each under every `sym_generic` flag.
pub fn confn_table_oracle(r_range: (u32, u32), d_range: (i64, i64), genus: u32) -> Result<OracleReport> {
    if genus < 2 {
        return Err(Error::Precondition("the table covers genus g ≥ 2".into()));
    }
    let (mut report, started) = OracleReport::start("confn-table", None);
    for r in r_range.0.max(2)..=r_range.1 {
        let ri = i64::from(r);
        for d in d_range.0..=d_range.1 {
            let q = (d - 1).div_euclid(ri);
            let unstable = HnData::<i64>::from_pairs(&[(1, d - (ri - 1) * q), (r - 1, (ri - 1) * q)])?;
            let bundles = [
                (true, BundleDescriptor::semistable_on_curve(r, d)),
                (false, BundleDescriptor::with_hn(unstable)),
            ];
            for (semistable, e) in bundles {
                for sym in Ternary::ALL {
                    let expected = curve_table(ri, d, semistable, sym);
                    let v = confn_pe_curve(genus, &e.clone().with_sym_generic(sym))?;
                    let got = (i64::from(v.lower), i64::from(v.upper));
                    let witness_ok = match v.exact {
                        Some(x) if i64::from(x) == ri + 1 => {
                            v.witness.as_ref().is_some_and(|w| w.kind == WitnessKind::BasePointAdjoint)
                        }
                        _ => true,
                    };
                    report.check(got == expected && witness_ok, (r, d, semistable, sym), expected, got);
                }
            }
        }
    }
    Ok(report.finish(started))
}

fn ample_raw(r: i64, d: i64, m: i64, a: i64) -> bool {
    a > 0 && r * m + a * d > 0
}

/// All `t = r` families with `r·m_i + a_i·d = 1` and `a_i ≤ a_bound`: the
/// detector says critical, `deg Θ = 1`, `μ(F) = 1`, `μ(F(−Θ)) = 0`. Bumping
/// one fiber degree breaks criticality and the finder produces a block.
pub fn critical_enum_oracle(r: u32, d: i64, a_bound: u64) -> Result<OracleReport> {
    let ri = i64::from(r);
    if r < 2 || gcd_raw(ri, d) != 1 {
        return Err(Error::Precondition(format!("needs r ≥ 2 and gcd(r, d) = 1, got r = {r}, d = {d}")));
    }
    let (mut report, started) = OracleReport::start("critical", None);
    let base = BaseVariety::<i64>::curve(2);
    let e = BundleDescriptor::semistable_on_curve(r, d);
    let solutions: Vec<(i64, u64)> = (1..=a_bound)
        .filter(|&a| (1 - a as i64 * d).rem_euclid(ri) == 0)
        .map(|a| ((1 - a as i64 * d) / ri, a))
        .collect();
    if solutions.is_empty() {
        return Ok(report.finish(started));
    }
    let mut choice = vec![0usize; r as usize];
    loop {
        let pairs: Vec<(i64, u64)> = choice.iter().map(|&c| solutions[c]).collect();
        check_critical_family(&mut report, &e, &base, ri, d, &pairs)?;
        let mut pos = 0;
        while pos < choice.len() && choice[pos] + 1 == solutions.len() {
            choice[pos] = 0;
            pos += 1;
        }
        if pos == choice.len() {
            break;
        }
        choice[pos] += 1;
    }
    Ok(report.finish(started))
}

fn family(pairs: &[(i64, u64)]) -> TwistFamily<i64> {
    TwistFamily::new(pairs.iter().map(|&(m, a)| Twist::on_curve(m, a)).collect())
}

fn check_critical_family(
    report: &mut OracleReport,
    e: &BundleDescriptor<i64>,
    base: &BaseVariety<i64>,
    r: i64,
    d: i64,
    pairs: &[(i64, u64)],
) -> Result<()> {
    let input = (r, d, pairs.to_vec());
    for &(m, a) in pairs {
        report.check(r * m + a as i64 * d == 1 && ample_raw(r, d, m, a as i64), &input, "r·m + a·d = 1", (m, a));
    }
    let verdict = detect_critical_case(e, &family(pairs), base, 4)?;
    report.check(verdict == Criticality::Critical, &input, Criticality::Critical, verdict);
    if verdict == Criticality::Critical {
        let check = theta_for_critical(e, &family(pairs), base, 4)?;
        // r·deg Θ = Σ (r·m_i + a_i·d) = r
        let sum_m: i64 = pairs.iter().map(|p| p.0).sum();
        let a_sum: i64 = pairs.iter().map(|p| p.1 as i64).sum();
        let theta_raw = Ratio::new(a_sum * d + r * sum_m, r);
        let one = RationalClass::from_i64s(&[1]);
        report.check(theta_raw == Ratio::from_integer(1), &input, "deg Θ = 1 (raw)", theta_raw);
        report.check(check.theta == one, &input, "Θ = 1", &check.theta);
        report.check(check.f_slope == one, &input, "μ(F) = 1", &check.f_slope);
        report.check(check.twisted_slope.is_zero(), &input, "μ(F(−Θ)) = 0", &check.twisted_slope);
    }

    // near miss: a₁ + 1, with m₁ the least integer keeping the twist ample
    let mut bumped = pairs.to_vec();
    let a1 = bumped[0].1 as i64 + 1;
    bumped[0] = ((-a1 * d).div_euclid(r) + 1, a1 as u64);
    let input = (r, d, bumped.clone());
    let verdict = detect_critical_case(e, &family(&bumped), base, 4)?;
    report.check(verdict == Criticality::NotCritical, &input, Criticality::NotCritical, verdict);
    let a_list: Vec<u64> = bumped.iter().map(|p| p.1).collect();
    let block = find_zero_sum_partition(&a_list, r as u64).map(|s| s.indices);
    let valid = block.as_ref().is_some_and(|idx| {
        !idx.is_empty() && idx.len() < a_list.len() && idx.iter().map(|&i| a_list[i]).sum::<u64>() % r as u64 == 0
    });
    report.check(valid, &input, "zero-sum block", block);
    Ok(())
}

/// Sweep of [`critical_enum_oracle`] over `r ∈ [2, r_max]`, `|d| ≤ d_abs`,
/// `gcd(r, d) = 1`.
pub fn critical_sweep(r_max: u32, d_abs: i64, a_bound: u64) -> Result<OracleReport> {
    let (mut report, started) = OracleReport::start("critical", None);
    for r in 2..=r_max {
        for d in -d_abs..=d_abs {
            if gcd_raw(i64::from(r), d) == 1 {
                report.absorb(critical_enum_oracle(r, d, a_bound)?);
            }
        }
    }
    Ok(report.finish(started))
}

/// Least `n ≤ n_max` with every `n·p_i` divisible by `q_i`.
pub fn denominator_oracle(delta: &RationalClass<i64>, n_max: i64) -> Result<OracleReport> {
    let (mut report, started) = OracleReport::start("denominator", None);
    let scan = (1..=n_max).find(|n| delta.coords().iter().all(|c| (n * c.numer()) % c.denom() == 0));
    let Some(scan) = scan else {
        return Err(Error::SizeCap(format!("denominator of {delta} exceeds {n_max}")));
    };
    report.check(scan == delta.denominator(), delta, scan, delta.denominator());
    Ok(report.finish(started))
}

fn divisors(n: i64) -> Vec<i64> {
    (1..=n).filter(|k| n % k == 0).collect()
}

/// Random classes of length 1 to 4 whose denominators divide some `D ≤ max_den`.
pub fn denominator_batch(seed: u64, cases: usize, max_den: i64) -> Result<OracleReport> {
    let (mut report, started) = OracleReport::start("denominator", Some(seed));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..cases {
        let target = rng.gen_range(1..=max_den);
        let divs = divisors(target);
        let len = rng.gen_range(1..=4);
        let coords = (0..len)
            .map(|_| Ratio::new(rng.gen_range(-100..=100), divs[rng.gen_range(0..divs.len())]))
            .collect();
        report.absorb(denominator_oracle(&RationalClass::new(coords), max_den)?);
    }
    Ok(report.finish(started))
}

/// For curve semistable bundles `Δ = 0` and `c₂ = (r−1)/(2r)·c₁²` hold
/// together; moving `c₂` off the forced value breaks both.
pub fn chern_batch(seed: u64, cases: usize) -> Result<OracleReport> {
    let (mut report, started) = OracleReport::start("chern", Some(seed));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..cases {
        let r: u32 = rng.gen_range(1..=8);
        let ri = i64::from(r);
        let e = BundleDescriptor::semistable_on_curve(r, rng.gen_range(-20..=20));
        let c1_sq = Ratio::new(rng.gen_range(-50..=50), rng.gen_range(1..=6));
        let forced = Ratio::new(ri - 1, 2 * ri) * c1_sq;
        let bump = Ratio::new(rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 }, rng.gen_range(1..=6));
        let c2 = csst_c2_pairing(&e, &c1_sq)?;
        for (label, c2_case) in [("csst", c2), ("perturbed", c2 + bump)] {
            let delta = discriminant(r, c1_sq, c2_case);
            let (ch0, ch1_sq, ch2) = chern_character_terms(r, c1_sq, c2_case);
            let delta_ch = discriminant_from_ch(ch0, ch1_sq, ch2);
            let input = (label, r, c1_sq, c2_case);
            report.check(delta.is_zero() == (c2_case == forced), &input, "Δ = 0 ⇔ c₂ forced", delta);
            report.check(delta == delta_ch, &input, delta, delta_ch);
        }
        report.check(c2 == forced, (r, c1_sq), forced, c2);
    }
    Ok(report.finish(started))
}

/// `r·λ_E` is nef and not ample for random curve semistable bundles over
/// curves and over a Picard rank two abelian surface.
pub fn lambda_nef_batch(seed: u64, cases: usize) -> Result<OracleReport> {
    let (mut report, started) = OracleReport::start("lambda-nef", Some(seed));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let surface = BaseVariety::<i64>::abelian(
        2,
        NsModel::from_facets(&[&[1, 0], &[1, 2]])?,
        Ternary::Unknown,
        Ternary::Unknown,
    )?;
    for _ in 0..cases {
        let r: u32 = rng.gen_range(1..=10);
        let (e, base) = if rng.gen_bool(0.5) {
            let g = rng.gen_range(0..=5);
            (BundleDescriptor::semistable_on_curve(r, rng.gen_range(-40..=40)), BaseVariety::curve(g))
        } else {
            let c1 = RationalClass::from_i64s(&[rng.gen_range(-40..=40), rng.gen_range(-40..=40)]);
            (BundleDescriptor::curve_semistable(r, c1), surface.clone())
        };
        let rl = PeClass::lambda(&e).scale(&e.rank_q());
        let got = (pe_is_nef_csst(&rl, &e, &base)?, pe_is_ample_csst(&rl, &e, &base)?);
        report.check(got == (true, false), (r, &e.c1, base.kind()), (true, false), got);
    }
    Ok(report.finish(started))
}

/// Base point witnesses for `d ≡ 1 (mod r)` and lower bound witnesses for all
/// `(r, d)` over a genus `g` curve.
pub fn witness_oracle(r_max: u32, d_abs: i64, genus: u32) -> Result<OracleReport> {
    let (mut report, started) = OracleReport::start("witness", None);
    let base = BaseVariety::<i64>::curve(genus);
    for r in 2..=r_max {
        let ri = i64::from(r);
        for d in -d_abs..=d_abs {
            let e = BundleDescriptor::semistable_on_curve(r, d);
            if (d - 1).rem_euclid(ri) == 0 {
                let w = upper_witness_d_equiv_1(genus, r, d)?;
                for t in &w.twists.twists {
                    let m = t.m.integral_coords().expect("integral")[0];
                    let a = t.a as i64;
                    report.check(ri * m + a * d == 1, (r, d), "r·m + a·d = 1", (m, a));
                    report.check(ample_raw(ri, d, m, a), (r, d), "ample twist", (m, a));
                }
                let deg_f = d + w.twists.twists.iter().map(|t| t.m.integral_coords().unwrap()[0]).sum::<i64>();
                report.check(w.twists.len() == r as usize && deg_f == 1, (r, d), "deg F = 1", deg_f);
                report.check(
                    w.pushforward_slope == Some(RationalClass::from_i64s(&[1])),
                    (r, d),
                    "μ(F) = 1",
                    &w.pushforward_slope,
                );
                report.check(w.adjoint_class.a == Ratio::from_integer(0), (r, d), "a = 0", &w.adjoint_class);
            }
            let w = lower_bound_witness(&e, &base, None)?;
            let m_least = (-d).div_euclid(ri) + 1;
            let m = w.twists.twists[0].m.integral_coords().expect("integral")[0];
            report.check(m == m_least, (r, d), m_least, m);
            report.check(w.fiber_degree == -1 && -ri + (ri - 1) == -1, (r, d), -1, w.fiber_degree);
        }
    }
    Ok(report.finish(started))
}

/// Oracle suites addressable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Partition,
    Cones,
    ConfnTable,
    Critical,
    Denominator,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = ["partition", "cones", "confn-table", "critical", "denominator", "all"];

    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "partition" => Suite::Partition,
            "cones" => Suite::Cones,
            "confn-table" => Suite::ConfnTable,
            "critical" => Suite::Critical,
            "denominator" => Suite::Denominator,
            "all" => Suite::All,
            other => {
                return Err(Error::Precondition(format!(
                    "unknown suite `{other}`; expected one of {}",
                    Suite::NAMES.join(", ")
                )))
            }
        })
    }

    /// Default size knob: longest sequence, largest rank, fiber degree bound
    /// or denominator bound, by suite.
    pub fn default_bound(self) -> u64 {
        match self {
            Suite::Partition => 7,
            Suite::Cones => 5,
            Suite::ConfnTable => 6,
            Suite::Critical => 10,
            Suite::Denominator => 60,
            Suite::All => 0,
        }
    }

    /// Runs the suite; `bound` overrides [`Suite::default_bound`].
    pub fn run(self, seed: u64, bound: Option<u64>) -> Result<Vec<OracleReport>> {
        let b = bound.unwrap_or(self.default_bound());
        Ok(match self {
            Suite::Partition => vec![subset_sum_batch(seed, 1000, b as usize)?],
            Suite::Cones => vec![cone_agreement_oracle(b as u32, (-10, 10), (-10, 10), (0, 10))?],
            Suite::ConfnTable => vec![confn_table_oracle((2, b as u32), (-30, 30), 2)?],
            Suite::Critical => vec![critical_sweep(5, 10, b)?],
            Suite::Denominator => vec![denominator_batch(seed, 500, b as i64)?, chern_batch(seed, 200)?],
            Suite::All => {
                let mut all = Vec::new();
                for s in [Suite::Partition, Suite::Cones, Suite::ConfnTable, Suite::Critical, Suite::Denominator] {
                    all.extend(s.run(seed, None)?);
                }
                all.push(lambda_nef_batch(seed, 1000)?);
                all.push(witness_oracle(5, 20, 2)?);
                all
            }
        })
    }
}
