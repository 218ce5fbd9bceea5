//! Positivity on `P(E)`: cone tests, the adjoint pushforward
//! `F = Sym^{a−r}(E) ⊗ det(E) ⊗ M`, the slope criterion for global generation
//! on curves, zero-sum partitions of fiber degrees, and the critical case.
//!
//! A line bundle on `P(E)` is written `π*M(a)` and stored as the pair
//! `(m, a)`, `m` a class on the base and `a` the fiber degree.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed};

use crate::bundles::{BaseVariety, BundleDescriptor, SlopeData, SlopeOp};
use crate::error::{Error, Result};
use crate::nslattice::RationalClass;
use crate::scalar::{lift, lift_u, Scalar, Q};
use crate::ternary::Ternary;

/// The class `π*M(a)` on `P(E)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PeClass<T: Scalar> {
    pub m: RationalClass<T>,
    pub a: Q<T>,
}

impl<T: Scalar> PeClass<T> {
    pub fn new(m: RationalClass<T>, a: Q<T>) -> Self {
        Self { m, a }
    }

    pub fn twist(m: RationalClass<T>, a: i64) -> Self {
        Self::new(m, Ratio::from_integer(lift(a)))
    }

    /// Normalized tautological class `λ_E = O(1) − π*μ(E)`.
    pub fn lambda(e: &BundleDescriptor<T>) -> Self {
        Self::new(-e.slope_class(), Q::one())
    }

    /// `ω_{P(E)} = O(−r) ⊗ π*(ω_S ⊗ det E)`.
    pub fn canonical(e: &BundleDescriptor<T>, base: &BaseVariety<T>) -> Result<Self> {
        let omega = base.canonical_class().ok_or_else(|| {
            Error::NotApplicable("the base descriptor does not fix a canonical class".into())
        })?;
        Ok(Self::new(&omega + &e.c1, -e.rank_q()))
    }

    pub fn scale(&self, q: &Q<T>) -> Self {
        Self::new(self.m.scale(q), self.a.clone() * q.clone())
    }

    pub fn plus(&self, other: &Self) -> Self {
        Self::new(&self.m + &other.m, self.a.clone() + other.a.clone())
    }
}

/// Image of `π*M(a)` under `(m, a) ↦ (m + a·μ(E), a)`; this linear
/// isomorphism carries `Nef(P(E))` onto `Nef(S) × R≥0` for curve semistable
/// `E`.
pub fn cone_product_map<T: Scalar>(l: &PeClass<T>, e: &BundleDescriptor<T>) -> (RationalClass<T>, Q<T>) {
    let shifted = &l.m + &e.slope_class().scale(&l.a);
    (shifted, l.a.clone())
}

pub fn cone_product_inverse<T: Scalar>(x: &RationalClass<T>, a: &Q<T>, e: &BundleDescriptor<T>) -> PeClass<T> {
    PeClass::new(x - &e.slope_class().scale(a), a.clone())
}

/// `M^r ⊗ det(E)^a` as the class `r·m + a·c₁(E)`, after the csst checks.
fn csst_test_class<T: Scalar>(
    l: &PeClass<T>,
    e: &BundleDescriptor<T>,
    base: &BaseVariety<T>,
) -> Result<RationalClass<T>> {
    if !e.curve_semistable {
        return Err(Error::NotApplicable(
            "the P(E) cone criterion needs a curve semistable bundle".into(),
        ));
    }
    let rho = base.ns().rank();
    l.m.check_len(rho)?;
    e.c1.check_len(rho)?;
    let r = e.rank_q();
    if !l.m.scale(&r).is_integral() || !(l.a.clone() * r).is_integer() {
        return Err(Error::NonIntegral("r·L".into()));
    }
    Ok(&l.m.scale(&e.rank_q()) + &e.c1.scale(&l.a))
}

/// Nef test on `P(E)` for curve semistable `E`: `a ≥ 0` and `M^r ⊗ det(E)^a`
/// nef on the base.
pub fn pe_is_nef_csst<T: Scalar>(l: &PeClass<T>, e: &BundleDescriptor<T>, base: &BaseVariety<T>) -> Result<bool> {
    let tested = csst_test_class(l, e, base)?;
    Ok(!l.a.is_negative() && base.ns().is_nef(&tested)?)
}

/// Ample variant of [`pe_is_nef_csst`] with strict inequalities.
pub fn pe_is_ample_csst<T: Scalar>(l: &PeClass<T>, e: &BundleDescriptor<T>, base: &BaseVariety<T>) -> Result<bool> {
    let tested = csst_test_class(l, e, base)?;
    Ok(l.a.is_positive() && base.ns().is_ample(&tested)?)
}

fn curve_butler_value<T: Scalar>(l: &PeClass<T>, e: &BundleDescriptor<T>) -> Result<Q<T>> {
    l.m.check_len(1)?;
    let (_, mu_minus) = e.mu_plus_minus()?;
    Ok(l.m.degree().clone() + l.a.clone() * mu_minus)
}

/// Ampleness on `P(E)` over a curve, any `E`: `a > 0` and
/// `deg M + a·μ⁻(E) > 0`.
pub fn pe_is_ample_curve<T: Scalar>(l: &PeClass<T>, e: &BundleDescriptor<T>) -> Result<bool> {
    let v = curve_butler_value(l, e)?;
    Ok(l.a.is_positive() && v.is_positive())
}

/// Closure of the ample cone: `a ≥ 0` and `deg M + a·μ⁻(E) ≥ 0`.
pub fn pe_is_nef_curve<T: Scalar>(l: &PeClass<T>, e: &BundleDescriptor<T>) -> Result<bool> {
    let v = curve_butler_value(l, e)?;
    Ok(!l.a.is_negative() && !v.is_negative())
}

/// One ample twist `L_i = π*M_i(a_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Twist<T: Scalar> {
    pub m: RationalClass<T>,
    pub a: u64,
}

impl<T: Scalar> Twist<T> {
    pub fn new(m: RationalClass<T>, a: u64) -> Self {
        Self { m, a }
    }

    /// Twist on a curve from `(deg M, a)`.
    pub fn on_curve(deg: i64, a: u64) -> Self {
        Self::new(RationalClass::from_i64s(&[deg]), a)
    }

    pub fn as_pe_class(&self) -> PeClass<T> {
        PeClass::new(self.m.clone(), Ratio::from_integer(lift_u(self.a)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TwistFamily<T: Scalar> {
    pub twists: Vec<Twist<T>>,
}

impl<T: Scalar> TwistFamily<T> {
    pub fn new(twists: Vec<Twist<T>>) -> Self {
        Self { twists }
    }

    pub fn len(&self) -> usize {
        self.twists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.twists.is_empty()
    }

    pub fn fiber_degrees(&self) -> Vec<u64> {
        self.twists.iter().map(|t| t.a).collect()
    }

    pub fn total_fiber_degree(&self) -> u64 {
        self.twists.iter().map(|t| t.a).sum()
    }

    /// `Σ m_i` over the given indices.
    pub fn m_sum_over(&self, indices: impl IntoIterator<Item = usize>, rho: usize) -> RationalClass<T> {
        indices
            .into_iter()
            .fold(RationalClass::zero(rho), |acc, i| &acc + &self.twists[i].m)
    }

    pub fn m_sum(&self, rho: usize) -> RationalClass<T> {
        self.m_sum_over(0..self.twists.len(), rho)
    }

    /// Every twist must be integral with `a_i ≥ 1` and ample on `P(E)`:
    /// Butler's criterion over a curve, the csst criterion elsewhere.
    pub fn validate(&self, e: &BundleDescriptor<T>, base: &BaseVariety<T>) -> Result<()> {
        for (i, t) in self.twists.iter().enumerate() {
            t.m.check_len(base.ns().rank())?;
            if !t.m.is_integral() {
                return Err(Error::NonIntegral(format!("twists[{i}].m")));
            }
            if t.a == 0 {
                return Err(Error::InvalidTwists(format!(
                    "twists[{i}] has a = 0; an ample twist restricts to O(a) with a ≥ 1 on fibers"
                )));
            }
            let l = t.as_pe_class();
            let ample = if base.is_curve() {
                pe_is_ample_curve(&l, e)?
            } else {
                pe_is_ample_csst(&l, e, base)?
            };
            if !ample {
                return Err(Error::InvalidTwists(format!(
                    "twists[{i}] = π*M(a) with M = {}, a = {} is not ample on P(E)",
                    t.m, t.a
                )));
            }
        }
        Ok(())
    }
}

/// `F = π_*(ω_{X/S} ⊗ L) = Sym^{a−r}(E) ⊗ det(E) ⊗ M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PushforwardDescriptor<T: Scalar> {
    pub rank: u128,
    pub slope: RationalClass<T>,
    /// `μ⁻(F)`, over a curve.
    pub mu_minus: Option<Q<T>>,
    pub sym_power: u64,
    pub det_class: RationalClass<T>,
    pub twist_class: RationalClass<T>,
}

pub fn adjoint_pushforward<T: Scalar>(
    e: &BundleDescriptor<T>,
    twists: &TwistFamily<T>,
    base: &BaseVariety<T>,
) -> Result<PushforwardDescriptor<T>> {
    e.validate(base)?;
    twists.validate(e, base)?;
    let a = twists.total_fiber_degree();
    let r = u64::from(e.rank);
    if a < r {
        return Err(Error::Precondition(format!(
            "total fiber degree a = {a} is below the rank r = {r}; Sym^(a−r) is undefined (needs t ≥ r twists)"
        )));
    }
    let rho = base.ns().rank();
    let m = twists.m_sum(rho);
    let k = a - r;
    let source = SlopeData::of(e);
    let f = source
        .apply(&SlopeOp::Sym(k as i64))?
        .tensor(&source.apply(&SlopeOp::Det)?)
        .apply(&SlopeOp::TensorLine(m.clone()))?;
    let mu_minus = if base.is_curve() { f.mu_minus().cloned() } else { None };
    Ok(PushforwardDescriptor {
        rank: f.rank,
        slope: f.slope,
        mu_minus,
        sym_power: k,
        det_class: e.c1.clone(),
        twist_class: m,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlopeGg {
    GloballyGenerated,
    /// `μ⁻(F) ≤ 1`: the sufficient criterion is silent.
    Inconclusive,
}

/// On a curve, `μ⁻(F) > 1` implies `ω_C ⊗ F` is globally generated.
pub fn slope_gg_curve<T: Scalar>(f: &PushforwardDescriptor<T>) -> Result<SlopeGg> {
    let mu = f
        .mu_minus
        .as_ref()
        .ok_or_else(|| Error::NotApplicable("slope criterion needs μ⁻(F) over a curve".into()))?;
    Ok(if *mu > Q::one() { SlopeGg::GloballyGenerated } else { SlopeGg::Inconclusive })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionRoute {
    /// Two prefix sums `b_k ≡ b_ℓ`, subset `{k+1, …, ℓ}`.
    PrefixSums,
    /// Family `a₁, a₂, a₁+a₂, …` after moving an incongruent pair to the front.
    ExtendedPrefixSums,
    /// Below the pigeonhole range (`t < r`): direct search.
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroSumSubset {
    /// Sorted 0-based indices into the input.
    pub indices: Vec<usize>,
    pub route: PartitionRoute,
}

/// Largest input on which the sub-pigeonhole search runs.
pub const EXHAUSTIVE_CAP: usize = 20;

/// Finds a nonempty proper subset `I` with `Σ_{i∈I} a_i ≡ 0 (mod r)`.
///
/// Always succeeds when `t > r`, and when `t = r` unless all `a_i` are
/// pairwise congruent and coprime to `r` (then no such subset exists). A
/// common residue `c` with `gcd(c, r) = g > 1` is caught by the first pass,
/// since `b_{r/g} ≡ 0`. For `t < r` the pigeonhole passes may miss, so a
/// direct search over at most [`EXHAUSTIVE_CAP`] entries finishes the job.
pub fn find_zero_sum_partition(a_list: &[u64], modulus: u64) -> Option<ZeroSumSubset> {
    assert!(modulus >= 1, "modulus must be positive");
    let t = a_list.len();
    if t < 2 {
        return None;
    }
    let residues: Vec<u64> = a_list.iter().map(|a| a % modulus).collect();

    if let Some(indices) = prefix_pass(&residues, modulus) {
        return Some(ZeroSumSubset { indices, route: PartitionRoute::PrefixSums });
    }
    if let Some(indices) = extended_pass(&residues, modulus) {
        return Some(ZeroSumSubset { indices, route: PartitionRoute::ExtendedPrefixSums });
    }
    if (t as u64) < modulus && t <= EXHAUSTIVE_CAP {
        let full = (1u32 << t) - 1;
        for mask in 1..full {
            let sum = (0..t)
                .filter(|i| mask >> i & 1 == 1)
                .fold(0u64, |acc, i| (acc + residues[i]) % modulus);
            if sum == 0 {
                let indices = (0..t).filter(|i| mask >> i & 1 == 1).collect();
                return Some(ZeroSumSubset { indices, route: PartitionRoute::Exhaustive });
            }
        }
    }
    None
}

/// Prefix sums `b_0 = 0, b_1, …, b_t`; any repeated residue other than the
/// pair `(b_0, b_t)` gives a proper block.
fn prefix_pass(residues: &[u64], modulus: u64) -> Option<Vec<usize>> {
    let t = residues.len();
    let mut seen: Vec<Option<usize>> = vec![None; modulus as usize];
    let mut b = 0u64;
    seen[0] = Some(0);
    for nu in 1..=t {
        b = (b + residues[nu - 1]) % modulus;
        match seen[b as usize] {
            Some(k) if !(k == 0 && nu == t) => return Some((k..nu).collect()),
            Some(_) => {}
            None => seen[b as usize] = Some(nu),
        }
    }
    None
}

/// With `a_p ≢ a_q`, the `t + 1` subsets `{p}, {q}, {p,q}, {p,q,·}, …` form a
/// chain apart from the first two, so any residue collision except
/// `({p},{q})` yields a difference set.
fn extended_pass(residues: &[u64], modulus: u64) -> Option<Vec<usize>> {
    let t = residues.len();
    let q = (1..t).find(|&j| residues[j] != residues[0])?;
    let mut order = vec![0, q];
    order.extend((1..t).filter(|&j| j != q));

    // family[k] = (residue, members of the subset as positions in `order`)
    let mut family: Vec<(u64, Vec<usize>)> = vec![(residues[0], vec![0]), (residues[q], vec![1])];
    let mut acc = (residues[0] + residues[q]) % modulus;
    family.push((acc, vec![0, 1]));
    for pos in 2..t {
        acc = (acc + residues[order[pos]]) % modulus;
        family.push((acc, (0..=pos).collect()));
    }

    let proper = |set: &[usize]| !set.is_empty() && set.len() < t;
    for (res, set) in &family {
        if *res == 0 && proper(set) {
            return Some(to_indices(set, &order));
        }
    }
    for i in 0..family.len() {
        for j in (i + 1)..family.len() {
            if family[i].0 != family[j].0 || (i, j) == (0, 1) {
                continue;
            }
            let (small, large) = (&family[i].1, &family[j].1);
            let diff: Vec<usize> = large.iter().copied().filter(|x| !small.contains(x)).collect();
            if proper(&diff) {
                return Some(to_indices(&diff, &order));
            }
        }
    }
    None
}

fn to_indices(positions: &[usize], order: &[usize]) -> Vec<usize> {
    let mut idx: Vec<usize> = positions.iter().map(|&p| order[p]).collect();
    idx.sort_unstable();
    idx
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criticality {
    Critical,
    NotCritical,
    Unknown,
}

/// The three conditions of the critical case, evaluated for `t = r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalAnalysis<T: Scalar> {
    pub denominator_is_rank: bool,
    pub congruent_coprime: bool,
    /// `Θ = det(E)^{a/r} ⊗ M`, when the first two conditions hold.
    pub theta: Option<RationalClass<T>>,
    /// Whether `Θ` splits as a sum of two ample classes.
    pub theta_splits: Option<Ternary>,
    pub verdict: Criticality,
}

fn require_csst<T: Scalar>(e: &BundleDescriptor<T>) -> Result<()> {
    if e.curve_semistable {
        Ok(())
    } else {
        Err(Error::NotApplicable("the critical case analysis needs a curve semistable bundle".into()))
    }
}

pub fn analyze_critical_case<T: Scalar>(
    e: &BundleDescriptor<T>,
    twists: &TwistFamily<T>,
    base: &BaseVariety<T>,
    search_bound: u32,
) -> Result<CriticalAnalysis<T>> {
    require_csst(e)?;
    e.validate(base)?;
    twists.validate(e, base)?;
    let r = u64::from(e.rank);
    let t = twists.len() as u64;
    let mut out = CriticalAnalysis {
        denominator_is_rank: e.slope_class().denominator() == lift_u(r),
        congruent_coprime: false,
        theta: None,
        theta_splits: None,
        verdict: Criticality::NotCritical,
    };
    if t < r {
        return Err(Error::Precondition(format!("critical case needs t ≥ r twists, got t = {t}, r = {r}")));
    }
    let a_list = twists.fiber_degrees();
    let first = a_list[0] % r;
    out.congruent_coprime = a_list.iter().all(|a| a % r == first) && first.gcd(&r) == 1;
    if t > r || !out.denominator_is_rank || !out.congruent_coprime {
        return Ok(out);
    }
    let theta = critical_theta(e, twists, base.ns().rank());
    let splits = base.ns().is_sum_of_two_ample(&theta, search_bound)?;
    out.verdict = match splits {
        Ternary::Yes => Criticality::NotCritical,
        Ternary::No => Criticality::Critical,
        Ternary::Unknown => Criticality::Unknown,
    };
    out.theta = Some(theta);
    out.theta_splits = Some(splits);
    Ok(out)
}

pub fn detect_critical_case<T: Scalar>(
    e: &BundleDescriptor<T>,
    twists: &TwistFamily<T>,
    base: &BaseVariety<T>,
    search_bound: u32,
) -> Result<Criticality> {
    analyze_critical_case(e, twists, base, search_bound).map(|a| a.verdict)
}

/// `(a/r)·c₁(E) + Σ m_i`.
fn critical_theta<T: Scalar>(e: &BundleDescriptor<T>, twists: &TwistFamily<T>, rho: usize) -> RationalClass<T> {
    let a = Ratio::new(lift_u::<T>(twists.total_fiber_degree()), lift(i64::from(e.rank)));
    &e.c1.scale(&a) + &twists.m_sum(rho)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaCheck<T: Scalar> {
    pub theta: RationalClass<T>,
    /// `μ(F) = a·μ(E) + μ(M)`.
    pub f_slope: RationalClass<T>,
    /// `μ(F(−Θ))`, zero in the critical case.
    pub twisted_slope: RationalClass<T>,
}

impl<T: Scalar> ThetaCheck<T> {
    pub fn is_balanced(&self) -> bool {
        self.twisted_slope.is_zero()
    }
}

/// In the critical case, `Θ = det(E)^{a/r} ⊗ M` is integral and
/// `μ(F(−Θ)) = 0`.
pub fn theta_for_critical<T: Scalar>(
    e: &BundleDescriptor<T>,
    twists: &TwistFamily<T>,
    base: &BaseVariety<T>,
    search_bound: u32,
) -> Result<ThetaCheck<T>> {
    let a = twists.total_fiber_degree();
    if a % u64::from(e.rank) != 0 {
        return Err(Error::Precondition(format!("r = {} does not divide a = {a}", e.rank)));
    }
    let verdict = detect_critical_case(e, twists, base, search_bound)?;
    if verdict != Criticality::Critical {
        return Err(Error::Precondition(format!("twist family is not in the critical case ({verdict:?})")));
    }
    let rho = base.ns().rank();
    let theta = critical_theta(e, twists, rho);
    if !theta.is_integral() {
        return Err(Error::NonIntegral("Θ".into()));
    }
    let f_slope = &e.slope_class().scale(&Ratio::from_integer(lift_u(a))) + &twists.m_sum(rho);
    let twisted_slope = &f_slope - &theta;
    Ok(ThetaCheck { theta, f_slope, twisted_slope })
}

/// A zero-sum block `I` turned into an ample `Θ` with `F(−Θ)` of ample
/// slope class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionTheta<T: Scalar> {
    pub block: ZeroSumSubset,
    pub modulus: u64,
    /// `Θ = a_I·μ(E) + Σ_{i∈I} m_i`, integral because the denominator of
    /// `μ(E)` divides `a_I`.
    pub theta: RationalClass<T>,
    /// `μ(F(−Θ)) = Σ_{j∉I} (a_j·μ(E) + m_j)`.
    pub remainder: RationalClass<T>,
    pub theta_ample: bool,
    pub remainder_ample: bool,
}

/// Splits `F` as `Θ` plus an ample remainder whenever the fiber degrees admit
/// a zero-sum block modulo the denominator of `μ(E)`.
pub fn partition_theta<T: Scalar>(
    e: &BundleDescriptor<T>,
    twists: &TwistFamily<T>,
    base: &BaseVariety<T>,
) -> Result<Option<PartitionTheta<T>>> {
    require_csst(e)?;
    twists.validate(e, base)?;
    let mu = e.slope_class();
    let modulus = mu
        .denominator()
        .to_u64()
        .ok_or_else(|| Error::Precondition("slope denominator out of range".into()))?;
    let Some(block) = find_zero_sum_partition(&twists.fiber_degrees(), modulus) else {
        return Ok(None);
    };
    let rho = base.ns().rank();
    let piece = |idx: &mut dyn Iterator<Item = usize>| -> RationalClass<T> {
        idx.fold(RationalClass::zero(rho), |acc, i| {
            let tw = &twists.twists[i];
            &(&acc + &tw.m) + &mu.scale(&Ratio::from_integer(lift_u(tw.a)))
        })
    };
    let theta = piece(&mut block.indices.iter().copied());
    let remainder = piece(&mut (0..twists.len()).filter(|i| !block.indices.contains(i)));
    let ns = base.ns();
    Ok(Some(PartitionTheta {
        theta_ample: ns.is_ample(&theta)?,
        remainder_ample: ns.is_ample(&remainder)?,
        block,
        modulus,
        theta,
        remainder,
    }))
}

/// `t / r⁻(E)`, a lower bound for `μ⁻(F)` over a curve when all `t` twists
/// are ample.
pub fn curve_slope_floor<T: Scalar>(e: &BundleDescriptor<T>, t: usize) -> Result<Q<T>> {
    let r_minus = e.minimal_quotient_rank()?;
    Ok(Ratio::new(lift(t as i64), lift(i64::from(r_minus))))
}
