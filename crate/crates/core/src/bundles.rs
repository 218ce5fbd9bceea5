//! Numerical descriptors of base varieties and vector bundles.
//!
//! A bundle is never constructed as a sheaf: everything downstream consumes
//! its rank, first Chern class, optional Harder–Narasimhan slopes on a curve,
//! an optional `c₂` pairing, and a handful of hypothesis flags.

use num_rational::Ratio;
use num_traits::One;

use crate::error::{Error, Result};
use crate::nslattice::{NsModel, RationalClass};
use crate::scalar::{lift, lift_u, Scalar, Q};
use crate::ternary::Ternary;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseVariety<T: Scalar> {
    /// Smooth projective curve; `N¹ = Z`, `Nef = R≥0`, `deg ω = 2g − 2`.
    Curve { genus: u32, ns: NsModel<T> },
    Abelian {
        dim: u32,
        all_ample_gg: Ternary,
        exists_non_gg_ample_twist: Ternary,
        ns: NsModel<T>,
    },
    /// Pullback along the Albanese map is an isomorphism on Picard groups.
    AbelianPicardType {
        albanese_surjective: bool,
        picard_rank_one: bool,
        pi1_abelian: Ternary,
        confn_upper: Option<u32>,
        exists_non_gg_ample_twist: Ternary,
        /// Only needed to write down adjoint classes in witnesses.
        canonical_class: Option<RationalClass<T>>,
        ns: NsModel<T>,
    },
    GenericPolarized { ns: NsModel<T>, canonical_class: RationalClass<T> },
}

impl<T: Scalar> BaseVariety<T> {
    pub fn curve(genus: u32) -> Self {
        BaseVariety::Curve { genus, ns: NsModel::curve() }
    }

    pub fn abelian(dim: u32, ns: NsModel<T>, all_ample_gg: Ternary, exists_non_gg_ample_twist: Ternary) -> Result<Self> {
        let base = BaseVariety::Abelian { dim, all_ample_gg, exists_non_gg_ample_twist, ns };
        base.validate()?;
        Ok(base)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            BaseVariety::Curve { .. } => "curve",
            BaseVariety::Abelian { .. } => "abelian",
            BaseVariety::AbelianPicardType { .. } => "abelian_picard_type",
            BaseVariety::GenericPolarized { .. } => "generic_polarized",
        }
    }

    pub fn ns(&self) -> &NsModel<T> {
        match self {
            BaseVariety::Curve { ns, .. }
            | BaseVariety::Abelian { ns, .. }
            | BaseVariety::AbelianPicardType { ns, .. }
            | BaseVariety::GenericPolarized { ns, .. } => ns,
        }
    }

    pub fn is_curve(&self) -> bool {
        matches!(self, BaseVariety::Curve { .. })
    }

    pub fn genus(&self) -> Option<u32> {
        match self {
            BaseVariety::Curve { genus, .. } => Some(*genus),
            _ => None,
        }
    }

    /// `ω_S` as a class, when the descriptor determines it.
    pub fn canonical_class(&self) -> Option<RationalClass<T>> {
        match self {
            BaseVariety::Curve { genus, .. } => {
                Some(RationalClass::from_i64s(&[2 * i64::from(*genus) - 2]))
            }
            BaseVariety::Abelian { ns, .. } => Some(RationalClass::zero(ns.rank())),
            BaseVariety::AbelianPicardType { canonical_class, .. } => canonical_class.clone(),
            BaseVariety::GenericPolarized { canonical_class, .. } => Some(canonical_class.clone()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            BaseVariety::Curve { ns, .. } => {
                if *ns != NsModel::curve() {
                    return Err(Error::InvalidBase("a curve carries the rank-one model Nef = R≥0".into()));
                }
            }
            BaseVariety::Abelian { dim, all_ample_gg, exists_non_gg_ample_twist, .. } => {
                if *dim == 0 {
                    return Err(Error::InvalidBase("abelian variety must have positive dimension".into()));
                }
                if all_ample_gg.is_yes() && exists_non_gg_ample_twist.is_yes() {
                    return Err(Error::InvalidBase(
                        "all_ample_gg = yes contradicts exists_non_gg_ample_twist = yes".into(),
                    ));
                }
            }
            BaseVariety::AbelianPicardType {
                albanese_surjective, picard_rank_one, canonical_class, ns, ..
            } => {
                if !albanese_surjective && !picard_rank_one {
                    return Err(Error::InvalidBase(
                        "abelian Picard type base needs a surjective Albanese map or Picard rank one".into(),
                    ));
                }
                if *picard_rank_one != (ns.rank() == 1) {
                    return Err(Error::InvalidBase(format!(
                        "picard_rank_one = {picard_rank_one} disagrees with ns.rank = {}",
                        ns.rank()
                    )));
                }
                if let Some(k) = canonical_class {
                    k.check_len(ns.rank())?;
                }
            }
            BaseVariety::GenericPolarized { ns, canonical_class } => {
                canonical_class.check_len(ns.rank())?;
            }
        }
        Ok(())
    }
}

/// One semistable quotient of a Harder–Narasimhan filtration on a curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HnQuotient<T: Scalar> {
    pub rank: u32,
    pub degree: T,
}

impl<T: Scalar> HnQuotient<T> {
    pub fn slope(&self) -> Q<T> {
        Ratio::new(self.degree.clone(), lift(i64::from(self.rank)))
    }
}

/// HN quotients ordered by strictly decreasing slope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HnData<T: Scalar> {
    quotients: Vec<HnQuotient<T>>,
}

impl<T: Scalar> HnData<T> {
    pub fn new(quotients: Vec<HnQuotient<T>>) -> Result<Self> {
        if quotients.is_empty() {
            return Err(Error::InvalidHn("at least one quotient required".into()));
        }
        if let Some(i) = quotients.iter().position(|q| q.rank == 0) {
            return Err(Error::InvalidHn(format!("quotient {i} has rank 0")));
        }
        for (i, pair) in quotients.windows(2).enumerate() {
            if pair[0].slope() <= pair[1].slope() {
                return Err(Error::InvalidHn(format!(
                    "slopes must be strictly decreasing: quotient {i} has slope {}, quotient {} has slope {}",
                    crate::scalar::fmt_q(&pair[0].slope()),
                    i + 1,
                    crate::scalar::fmt_q(&pair[1].slope()),
                )));
            }
        }
        Ok(Self { quotients })
    }

    /// Convenience for literal `(rank, degree)` lists.
    pub fn from_pairs(pairs: &[(u32, i64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(rank, d)| HnQuotient { rank, degree: lift(d) }).collect())
    }

    pub fn quotients(&self) -> &[HnQuotient<T>] {
        &self.quotients
    }

    pub fn total_rank(&self) -> u32 {
        self.quotients.iter().map(|q| q.rank).sum()
    }

    pub fn total_degree(&self) -> T {
        self.quotients.iter().fold(T::zero(), |acc, q| acc + q.degree.clone())
    }

    pub fn mu_plus(&self) -> Q<T> {
        self.quotients[0].slope()
    }

    pub fn mu_minus(&self) -> Q<T> {
        self.quotients[self.quotients.len() - 1].slope()
    }

    /// Rank of the minimal-slope quotient.
    pub fn minimal_rank(&self) -> u32 {
        self.quotients[self.quotients.len() - 1].rank
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleDescriptor<T: Scalar> {
    pub rank: u32,
    pub c1: RationalClass<T>,
    pub curve_hn: Option<HnData<T>>,
    pub curve_semistable: bool,
    pub stable: bool,
    /// For every `k > 0`, `Sym^{rk}(E)` has no line bundle direct summand.
    pub sym_generic: Ternary,
    pub c2_pairing: Option<Q<T>>,
}

impl<T: Scalar> BundleDescriptor<T> {
    /// A curve semistable bundle with the given first Chern class; `stable`
    /// is set exactly when the slope denominator forces it.
    pub fn curve_semistable(rank: u32, c1: RationalClass<T>) -> Self {
        let mut e = BundleDescriptor {
            rank,
            c1,
            curve_hn: None,
            curve_semistable: true,
            stable: false,
            sym_generic: Ternary::Unknown,
            c2_pairing: None,
        };
        e.stable = e.slope_class().denominator() == lift(i64::from(rank));
        e
    }

    /// Semistable bundle of rank `r` and degree `d` on a curve.
    pub fn semistable_on_curve(rank: u32, degree: i64) -> Self {
        Self::curve_semistable(rank, RationalClass::from_i64s(&[degree]))
    }

    /// Curve bundle with the given HN filtration; semistable iff one quotient.
    pub fn with_hn(hn: HnData<T>) -> Self {
        let rank = hn.total_rank();
        let c1 = RationalClass::from_integers(vec![hn.total_degree()]);
        if hn.quotients().len() == 1 {
            let mut e = Self::curve_semistable(rank, c1);
            e.curve_hn = Some(hn);
            e
        } else {
            BundleDescriptor {
                rank,
                c1,
                curve_hn: Some(hn),
                curve_semistable: false,
                stable: false,
                sym_generic: Ternary::Unknown,
                c2_pairing: None,
            }
        }
    }

    pub fn with_sym_generic(mut self, flag: Ternary) -> Self {
        self.sym_generic = flag;
        self
    }

    pub fn rank_q(&self) -> Q<T> {
        Ratio::from_integer(lift(i64::from(self.rank)))
    }

    /// `μ(E) = c₁(E) / r`.
    pub fn slope_class(&self) -> RationalClass<T> {
        self.c1.scale(&self.rank_q().recip())
    }

    /// Degree of `E` on a curve base.
    pub fn curve_degree(&self) -> Result<T> {
        if self.c1.len() != 1 {
            return Err(Error::NotApplicable("degree is only defined over a Picard-rank-one base".into()));
        }
        Ok(self.c1.degree().numer().clone())
    }

    /// `(μ⁺, μ⁻)` on a curve.
    pub fn mu_plus_minus(&self) -> Result<(Q<T>, Q<T>)> {
        if let Some(hn) = &self.curve_hn {
            return Ok((hn.mu_plus(), hn.mu_minus()));
        }
        if self.curve_semistable && self.c1.len() == 1 {
            let mu = self.slope_class().degree().clone();
            return Ok((mu.clone(), mu));
        }
        Err(Error::InvalidBundle(
            "μ± needs Harder-Narasimhan data or the semistable flag on a curve".into(),
        ))
    }

    /// Rank `r⁻` of the minimal-slope HN quotient.
    pub fn minimal_quotient_rank(&self) -> Result<u32> {
        match &self.curve_hn {
            Some(hn) => Ok(hn.minimal_rank()),
            None if self.curve_semistable => Ok(self.rank),
            None => Err(Error::InvalidBundle("minimal quotient rank needs HN data".into())),
        }
    }

    /// `Δ(E)` against the degree-2 pairing, given `c₁²` in that pairing.
    pub fn discriminant_with(&self, c1_sq: &Q<T>) -> Option<Q<T>> {
        self.c2_pairing
            .as_ref()
            .map(|c2| discriminant(self.rank, c1_sq.clone(), c2.clone()))
    }

    pub fn validate(&self, base: &BaseVariety<T>) -> Result<()> {
        base.validate()?;
        if self.rank == 0 {
            return Err(Error::InvalidBundle("rank must be positive".into()));
        }
        self.c1.check_len(base.ns().rank())?;
        if !self.c1.is_integral() {
            return Err(Error::NonIntegral("c1".into()));
        }
        if let Some(hn) = &self.curve_hn {
            if !base.is_curve() {
                return Err(Error::InvalidBundle("curve_hn is only allowed over a curve base".into()));
            }
            if hn.total_rank() != self.rank {
                return Err(Error::InvalidBundle(format!(
                    "HN ranks sum to {}, rank is {}",
                    hn.total_rank(),
                    self.rank
                )));
            }
            if Ratio::from_integer(hn.total_degree()) != *self.c1.degree() {
                return Err(Error::InvalidBundle(format!(
                    "HN degrees sum to {}, deg c1 is {}",
                    hn.total_degree(),
                    self.c1.degree()
                )));
            }
            let single = hn.quotients().len() == 1;
            if self.curve_semistable != single {
                return Err(Error::InvalidBundle(format!(
                    "curve_semistable = {} but the HN filtration has {} quotient(s)",
                    self.curve_semistable,
                    hn.quotients().len()
                )));
            }
        }
        if base.is_curve() && !self.curve_semistable && self.curve_hn.is_none() {
            return Err(Error::InvalidBundle(
                "a bundle on a curve that is not semistable needs its HN filtration".into(),
            ));
        }
        if self.stable && !self.curve_semistable {
            return Err(Error::InvalidBundle("stable requires curve_semistable".into()));
        }
        if self.curve_semistable
            && !self.stable
            && self.slope_class().denominator() == lift(i64::from(self.rank))
        {
            return Err(Error::InvalidBundle(
                "a curve semistable bundle whose slope has denominator equal to the rank is stable"
                    .into(),
            ));
        }
        if !base.is_curve() && self.sym_generic != Ternary::Unknown {
            return Err(Error::InvalidBundle("sym_generic is only meaningful over a curve".into()));
        }
        Ok(())
    }
}

/// `Δ = 2r·c₂ − (r−1)·c₁²`.
pub fn discriminant<T: Scalar>(rank: u32, c1_sq: Q<T>, c2: Q<T>) -> Q<T> {
    let r: Q<T> = Ratio::from_integer(lift(i64::from(rank)));
    let two = Q::from_integer(lift(2));
    two * r.clone() * c2 - (r - Q::one()) * c1_sq
}

/// `(ch₀, ch₁², ch₂)` from `(r, c₁², c₂)`, with `ch₂ = (c₁² − 2c₂)/2`.
pub fn chern_character_terms<T: Scalar>(rank: u32, c1_sq: Q<T>, c2: Q<T>) -> (Q<T>, Q<T>, Q<T>) {
    let two = Q::from_integer(lift(2));
    let ch2 = (c1_sq.clone() - two.clone() * c2) / two;
    (Ratio::from_integer(lift(i64::from(rank))), c1_sq, ch2)
}

/// `Δ = ch₁² − 2·ch₀·ch₂`.
pub fn discriminant_from_ch<T: Scalar>(ch0: Q<T>, ch1_sq: Q<T>, ch2: Q<T>) -> Q<T> {
    ch1_sq - Q::from_integer(lift(2)) * ch0 * ch2
}

/// Coefficients of `ch(E) = r·exp(μ(E))` in powers of `μ`: `r / k!` for
/// `k = 0..=up_to`.
pub fn chern_character_csst<T: Scalar>(e: &BundleDescriptor<T>, up_to: u32) -> Result<Vec<Q<T>>> {
    if !e.curve_semistable {
        return Err(Error::NotApplicable(
            "the exponential Chern character needs a curve semistable bundle".into(),
        ));
    }
    let mut coeffs = Vec::with_capacity(up_to as usize + 1);
    let mut term = e.rank_q();
    for k in 0..=up_to {
        if k > 0 {
            term = term / Ratio::from_integer(lift(i64::from(k)));
        }
        coeffs.push(term.clone());
    }
    Ok(coeffs)
}

/// The `c₂` pairing forced on a curve semistable bundle by its Chern
/// character: `c₂ = c₁²/2 − ch₂` with `ch₂ = (r/2)·μ²`.
pub fn csst_c2_pairing<T: Scalar>(e: &BundleDescriptor<T>, c1_sq: &Q<T>) -> Result<Q<T>> {
    let coeffs = chern_character_csst(e, 2)?;
    let r = e.rank_q();
    let mu_sq = c1_sq.clone() / (r.clone() * r);
    let ch2 = coeffs[2].clone() * mu_sq;
    Ok(c1_sq.clone() / Q::from_integer(lift(2)) - ch2)
}

/// Rank and slope data of a bundle derived by a slope-compatible operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeData<T: Scalar> {
    pub rank: u128,
    pub slope: RationalClass<T>,
    /// `(μ⁺, μ⁻)` when the input lives on a curve with known extremes.
    pub extremes: Option<(Q<T>, Q<T>)>,
}

impl<T: Scalar> SlopeData<T> {
    pub fn of(e: &BundleDescriptor<T>) -> Self {
        SlopeData {
            rank: u128::from(e.rank),
            slope: e.slope_class(),
            extremes: e.mu_plus_minus().ok(),
        }
    }

    pub fn line(class: RationalClass<T>) -> Self {
        let extremes = (class.len() == 1).then(|| (class.degree().clone(), class.degree().clone()));
        SlopeData { rank: 1, slope: class, extremes }
    }

    pub fn mu_minus(&self) -> Option<&Q<T>> {
        self.extremes.as_ref().map(|(_, lo)| lo)
    }

    /// Total first Chern class `rank · slope`.
    pub fn c1(&self) -> RationalClass<T> {
        self.slope.scale(&Ratio::from_integer(
            T::from_u128(self.rank).expect("rank fits the scalar backend"),
        ))
    }

    pub fn apply(&self, op: &SlopeOp<T>) -> Result<SlopeData<T>> {
        Ok(match op {
            SlopeOp::TensorLine(m) => {
                m.check_len(self.slope.len())?;
                let shift = (m.len() == 1).then(|| m.degree().clone());
                SlopeData {
                    rank: self.rank,
                    slope: &self.slope + m,
                    extremes: self.extremes.clone().zip(shift).map(|((hi, lo), s)| (hi + s.clone(), lo + s)),
                }
            }
            SlopeOp::Sym(k) => {
                if *k < 0 {
                    return Err(Error::Precondition(format!("Sym^k needs k ≥ 0, got {k}")));
                }
                let k_u = *k as u128;
                let kq: Q<T> = Ratio::from_integer(lift(*k));
                SlopeData {
                    rank: num_integer::binomial(k_u + self.rank - 1, self.rank - 1),
                    slope: self.slope.scale(&kq),
                    extremes: self.extremes.clone().map(|(hi, lo)| (hi * kq.clone(), lo * kq)),
                }
            }
            SlopeOp::Det => {
                let c1 = self.c1();
                let extremes = (c1.len() == 1).then(|| (c1.degree().clone(), c1.degree().clone()));
                SlopeData { rank: 1, slope: c1, extremes }
            }
            SlopeOp::Dual => SlopeData {
                rank: self.rank,
                slope: -&self.slope,
                extremes: self.extremes.clone().map(|(hi, lo)| (-lo, -hi)),
            },
        })
    }

    /// `self ⊗ other` for two bundles of known slope data; extremes add.
    pub fn tensor(&self, other: &SlopeData<T>) -> SlopeData<T> {
        SlopeData {
            rank: self.rank * other.rank,
            slope: &self.slope + &other.slope,
            extremes: self
                .extremes
                .clone()
                .zip(other.extremes.clone())
                .map(|((h1, l1), (h2, l2))| (h1 + h2, l1 + l2)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlopeOp<T: Scalar> {
    TensorLine(RationalClass<T>),
    Sym(i64),
    Det,
    Dual,
}

/// `(rank, slope)` of the bundle obtained from `e` by `op`.
pub fn slope_algebra<T: Scalar>(e: &BundleDescriptor<T>, op: &SlopeOp<T>) -> Result<SlopeData<T>> {
    SlopeData::of(e).apply(op)
}

/// Whether `gcd(r, d) = 1` for a curve bundle.
pub fn coprime_rank_degree<T: Scalar>(rank: u32, degree: &T) -> bool {
    lift_u::<T>(u64::from(rank)).gcd(degree).is_one()
}

/// `d mod r` in `[0, r)`.
pub fn degree_residue<T: Scalar>(rank: u32, degree: &T) -> T {
    degree.mod_floor(&lift_u::<T>(u64::from(rank)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q_from, q_int};
    use num_bigint::BigInt;
    use proptest::prelude::*;

    type E = BundleDescriptor<i64>;

    #[test]
    fn slope_class_examples() {
        assert_eq!(E::semistable_on_curve(2, 3).slope_class(), RationalClass::new(vec![q_from(3, 2)]));
        let abelian_ns = NsModel::from_facets(&[&[1, 0], &[0, 1]]).unwrap();
        let zero = E::curve_semistable(4, RationalClass::zero(2));
        assert!(zero.slope_class().is_zero());
        let e = E::curve_semistable(3, RationalClass::from_i64s(&[6, -3]));
        assert_eq!(e.slope_class(), RationalClass::from_i64s(&[2, -1]));
        let base = BaseVariety::abelian(2, abelian_ns, Ternary::Unknown, Ternary::Unknown).unwrap();
        e.validate(&base).unwrap();
    }

    #[test]
    fn mu_plus_minus_examples() {
        let e = E::with_hn(HnData::from_pairs(&[(1, 1), (1, 0)]).unwrap());
        assert_eq!(e.mu_plus_minus().unwrap(), (q_int(1), q_int(0)));
        let e = E::semistable_on_curve(2, 3);
        assert_eq!(e.mu_plus_minus().unwrap(), (q_from(3, 2), q_from(3, 2)));
        let e = E::with_hn(HnData::from_pairs(&[(2, 3), (1, 0)]).unwrap());
        assert_eq!(e.mu_plus_minus().unwrap(), (q_from(3, 2), q_int(0)));
        assert_eq!(e.slope_class().degree(), &q_int(1));
        let mut bare = E::semistable_on_curve(2, 3);
        bare.curve_semistable = false;
        bare.stable = false;
        assert!(bare.mu_plus_minus().is_err());
    }

    #[test]
    fn hn_must_have_decreasing_slopes() {
        assert!(HnData::<i64>::from_pairs(&[(1, 0), (1, 1)]).is_err());
        assert!(HnData::<i64>::from_pairs(&[(1, 1), (2, 2)]).is_err());
        assert!(HnData::<i64>::from_pairs(&[]).is_err());
        assert!(HnData::<i64>::from_pairs(&[(0, 1)]).is_err());
    }

    #[test]
    fn descriptor_validation() {
        let curve = BaseVariety::<i64>::curve(2);
        E::semistable_on_curve(2, 3).validate(&curve).unwrap();
        let mut not_stable = E::semistable_on_curve(2, 3);
        not_stable.stable = false;
        assert!(not_stable.validate(&curve).is_err());
        let mut wrong_rank = E::with_hn(HnData::from_pairs(&[(2, 3), (1, 0)]).unwrap());
        wrong_rank.rank = 4;
        assert!(wrong_rank.validate(&curve).is_err());
        let mut flagged = E::with_hn(HnData::from_pairs(&[(2, 3), (1, 0)]).unwrap());
        flagged.curve_semistable = true;
        assert!(flagged.validate(&curve).is_err());
        let mut unstable_stable = E::with_hn(HnData::from_pairs(&[(2, 3), (1, 0)]).unwrap());
        unstable_stable.stable = true;
        assert!(unstable_stable.validate(&curve).is_err());
        let mut frac = E::semistable_on_curve(2, 3);
        frac.c1 = RationalClass::new(vec![q_from(1, 2)]);
        assert!(frac.validate(&curve).is_err());
    }

    #[test]
    fn base_validation() {
        let quad = NsModel::<i64>::from_facets(&[&[1, 0], &[0, 1]]).unwrap();
        assert!(BaseVariety::abelian(2, quad.clone(), Ternary::Yes, Ternary::Yes).is_err());
        let apt = BaseVariety::AbelianPicardType {
            albanese_surjective: false,
            picard_rank_one: false,
            pi1_abelian: Ternary::Unknown,
            confn_upper: None,
            exists_non_gg_ample_twist: Ternary::Unknown,
            canonical_class: None,
            ns: quad.clone(),
        };
        assert!(apt.validate().is_err());
        let apt = BaseVariety::AbelianPicardType {
            albanese_surjective: false,
            picard_rank_one: true,
            pi1_abelian: Ternary::Unknown,
            confn_upper: None,
            exists_non_gg_ample_twist: Ternary::Unknown,
            canonical_class: None,
            ns: quad,
        };
        assert!(apt.validate().is_err());
        assert_eq!(BaseVariety::<i64>::curve(3).canonical_class().unwrap(), RationalClass::from_i64s(&[4]));
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(discriminant::<i64>(2, q_int(4), q_int(1)), q_int(0));
        assert_eq!(discriminant::<i64>(3, q_int(0), q_int(0)), q_int(0));
        assert_eq!(discriminant::<i64>(2, q_int(0), q_int(1)), q_int(4));
    }

    #[test]
    fn chern_character_examples() {
        let e = E::semistable_on_curve(2, 5);
        assert_eq!(chern_character_csst(&e, 2).unwrap(), vec![q_int(2), q_int(2), q_int(1)]);
        let line = E::semistable_on_curve(1, 7);
        assert_eq!(chern_character_csst(&line, 2).unwrap(), vec![q_int(1), q_int(1), q_from(1, 2)]);
        // Δ = 0 forces c₂ = 1 when r = 2, c₁² = 4
        let forced = csst_c2_pairing(&e, &q_int(4)).unwrap();
        assert_eq!(forced, q_int(1));
        assert_eq!(discriminant(2, q_int(4), forced), q_int(0));
        let unstable = E::with_hn(HnData::from_pairs(&[(1, 1), (1, 0)]).unwrap());
        assert!(chern_character_csst(&unstable, 2).is_err());
    }

    #[test]
    fn slope_algebra_examples() {
        let e = E::semistable_on_curve(2, 3);
        let s2 = slope_algebra(&e, &SlopeOp::Sym(2)).unwrap();
        assert_eq!((s2.rank, s2.slope.degree().clone()), (3, q_int(3)));
        let e3 = E::curve_semistable(3, RationalClass::from_i64s(&[6, -3]));
        let det = slope_algebra(&e3, &SlopeOp::Det).unwrap();
        assert_eq!((det.rank, det.slope), (1, RationalClass::from_i64s(&[6, -3])));
        assert!(slope_algebra(&e, &SlopeOp::Sym(-1)).is_err());

        // Sym²E ⊗ det E ⊗ M with deg M = 1: degrees 9 + 9 + 3 over rank 3
        let f = SlopeData::of(&e)
            .apply(&SlopeOp::Sym(2))
            .unwrap()
            .tensor(&SlopeData::of(&e).apply(&SlopeOp::Det).unwrap())
            .apply(&SlopeOp::TensorLine(RationalClass::from_i64s(&[1])))
            .unwrap();
        assert_eq!(f.rank, 3);
        assert_eq!(f.c1(), RationalClass::from_i64s(&[21]));
        assert_eq!(f.slope.degree(), &q_int(7));
        assert_eq!(f.slope.degree(), &(q_int(4) * q_from(3, 2) + q_int(1)));

        let hn = E::with_hn(HnData::from_pairs(&[(1, 2), (2, -1)]).unwrap());
        let dual = slope_algebra(&hn, &SlopeOp::Dual).unwrap();
        assert_eq!(dual.extremes, Some((q_from(1, 2), q_int(-2))));
    }

    #[test]
    fn works_over_bigint() {
        let e: BundleDescriptor<BigInt> = BundleDescriptor::semistable_on_curve(3, 5);
        assert!(e.stable);
        let s = slope_algebra(&e, &SlopeOp::Sym(4)).unwrap();
        assert_eq!(s.rank, 15);
        assert_eq!(s.slope.degree(), &q_from(20, 3));
    }

    /// Multiset enumeration of Chern roots: degree of `Sym^k` of a bundle with
    /// the given (possibly fractional) roots, divided by the rank.
    fn sym_slope_by_roots(roots: &[Q<i64>], k: usize) -> (u128, Q<i64>) {
        fn walk(roots: &[Q<i64>], start: usize, left: usize, acc: Q<i64>, out: &mut (u128, Q<i64>)) {
            if left == 0 {
                out.0 += 1;
                out.1 += acc;
                return;
            }
            for i in start..roots.len() {
                walk(roots, i, left - 1, acc.clone() + roots[i].clone(), out);
            }
        }
        let mut out = (0u128, q_int(0));
        walk(roots, 0, k, q_int(0), &mut out);
        let rank = out.0;
        (rank, out.1 / q_int(rank as i64))
    }

    fn hn_strategy() -> impl Strategy<Value = Vec<(u32, i64)>> {
        prop::collection::vec((1u32..=2, -5i64..=5), 1..=3).prop_filter_map("strictly decreasing slopes", |mut qs| {
            qs.sort_by(|a, b| (b.1 * i64::from(a.0)).cmp(&(a.1 * i64::from(b.0))));
            let ok = qs.windows(2).all(|w| w[0].1 * i64::from(w[1].0) > w[1].1 * i64::from(w[0].0));
            ok.then_some(qs)
        })
    }

    proptest! {
        #[test]
        fn sym_slope_matches_root_bookkeeping(pairs in hn_strategy(), k in 0i64..=6) {
            let e = E::with_hn(HnData::from_pairs(&pairs).unwrap());
            let roots: Vec<Q<i64>> = pairs
                .iter()
                .flat_map(|&(r, d)| std::iter::repeat(q_from(d, i64::from(r))).take(r as usize))
                .collect();
            let (rank, slope) = sym_slope_by_roots(&roots, k as usize);
            let s = slope_algebra(&e, &SlopeOp::Sym(k)).unwrap();
            prop_assert_eq!(s.rank, rank);
            prop_assert_eq!(s.slope.degree().clone(), slope);
        }

        #[test]
        fn mu_minus_le_mu_le_mu_plus(pairs in hn_strategy()) {
            let e = E::with_hn(HnData::from_pairs(&pairs).unwrap());
            let (hi, lo) = e.mu_plus_minus().unwrap();
            let mu = e.slope_class().degree().clone();
            prop_assert!(lo <= mu && mu <= hi);
            prop_assert_eq!(lo == hi, pairs.len() == 1);
            prop_assert_eq!(lo == mu, pairs.len() == 1);
        }

        #[test]
        fn slope_denominator_divides_rank(r in 1u32..=12, d in -60i64..=60) {
            let e = E::semistable_on_curve(r, d);
            prop_assert_eq!(i64::from(r) % e.slope_class().denominator(), 0);
        }

        #[test]
        fn discriminant_forms_agree(r in 1u32..=8, a in -30i64..=30, b in 1i64..=6, c in -30i64..=30, q in 1i64..=6) {
            let c1_sq: Q<i64> = q_from(a, b);
            let c2: Q<i64> = q_from(c, q);
            let (ch0, ch1_sq, ch2) = chern_character_terms(r, c1_sq.clone(), c2.clone());
            prop_assert_eq!(discriminant(r, c1_sq, c2), discriminant_from_ch(ch0, ch1_sq, ch2));
        }

        #[test]
        fn vanishing_discriminant_iff_csst_c2(r in 1u32..=8, a in -30i64..=30, b in 1i64..=6, bump in -2i64..=2) {
            let e = E::semistable_on_curve(r, 0);
            let c1_sq = q_from(a, b);
            let forced = csst_c2_pairing(&e, &c1_sq).unwrap();
            let c2 = forced.clone() + q_from(bump, 7);
            let expected = q_int::<i64>(i64::from(r) - 1) / q_int(2 * i64::from(r)) * c1_sq.clone();
            prop_assert_eq!(forced, expected.clone());
            prop_assert_eq!(discriminant(r, c1_sq, c2.clone()) == q_int(0), c2 == expected);
        }
    }
}
