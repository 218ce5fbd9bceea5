//! Exact arithmetic on rational Néron–Severi classes and polyhedral nef cones.
//!
//! `N¹(S)` is modelled as `Z^ρ` in user-chosen coordinates, tensored with `Q`,
//! with the nef cone given by inequality covectors. Torsion is invisible in
//! this model, so the denominator of a class is computed in the free quotient.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{fmt_q, lift, Scalar, Q};
use crate::ternary::Ternary;

/// A point of `N¹(S) ⊗ Q` in the model's integral coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalClass<T: Scalar> {
    coords: Vec<Q<T>>,
}

impl<T: Scalar> RationalClass<T> {
    pub fn new(coords: Vec<Q<T>>) -> Self {
        Self { coords }
    }

    pub fn from_integers(coords: Vec<T>) -> Self {
        Self::new(coords.into_iter().map(Ratio::from_integer).collect())
    }

    /// Convenience for small literal classes.
    pub fn from_i64s(coords: &[i64]) -> Self {
        Self::from_integers(coords.iter().map(|&c| lift(c)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        Self::new(vec![Q::zero(); rank])
    }

    /// Degree-`d` class on a Picard-rank-one base.
    pub fn scalar(d: Q<T>) -> Self {
        Self::new(vec![d])
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[Q<T>] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(Ratio::is_integer)
    }

    pub fn integral_coords(&self) -> Option<Vec<T>> {
        self.coords
            .iter()
            .map(|c| c.is_integer().then(|| c.numer().clone()))
            .collect()
    }

    /// Least `n > 0` with `n·δ` integral: the lcm of the reduced denominators.
    pub fn denominator(&self) -> T {
        self.coords
            .iter()
            .fold(T::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// The single coordinate of a class on a Picard-rank-one base.
    ///
    /// Panics if the class is not one-dimensional.
    pub fn degree(&self) -> &Q<T> {
        assert_eq!(self.coords.len(), 1, "degree() needs a Picard-rank-one class");
        &self.coords[0]
    }

    pub fn scale(&self, q: &Q<T>) -> Self {
        Self::new(self.coords.iter().map(|c| c.clone() * q.clone()).collect())
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&Ratio::from_integer(lift(n)))
    }

    /// Pairing with an integer covector.
    pub fn pair(&self, covector: &[T]) -> Q<T> {
        debug_assert_eq!(covector.len(), self.coords.len());
        self.coords
            .iter()
            .zip(covector)
            .fold(Q::zero(), |acc, (c, f)| acc + c.clone() * Ratio::from_integer(f.clone()))
    }

    pub fn check_len(&self, expected: usize) -> Result<()> {
        if self.len() == expected {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected, got: self.len() })
        }
    }
}

impl<T: Scalar> fmt::Display for RationalClass<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(fmt_q).collect();
        write!(f, "({})", parts.join(", "))
    }
}

fn zip_with<T: Scalar>(
    a: &RationalClass<T>,
    b: &RationalClass<T>,
    op: impl Fn(Q<T>, Q<T>) -> Q<T>,
) -> RationalClass<T> {
    assert_eq!(a.len(), b.len(), "classes of different Picard rank");
    RationalClass::new(
        a.coords
            .iter()
            .zip(&b.coords)
            .map(|(x, y)| op(x.clone(), y.clone()))
            .collect(),
    )
}

impl<T: Scalar> Add for &RationalClass<T> {
    type Output = RationalClass<T>;
    fn add(self, rhs: Self) -> RationalClass<T> {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl<T: Scalar> Sub for &RationalClass<T> {
    type Output = RationalClass<T>;
    fn sub(self, rhs: Self) -> RationalClass<T> {
        zip_with(self, rhs, |x, y| x - y)
    }
}

impl<T: Scalar> Add for RationalClass<T> {
    type Output = RationalClass<T>;
    fn add(self, rhs: Self) -> RationalClass<T> {
        &self + &rhs
    }
}

impl<T: Scalar> Sub for RationalClass<T> {
    type Output = RationalClass<T>;
    fn sub(self, rhs: Self) -> RationalClass<T> {
        &self - &rhs
    }
}

impl<T: Scalar> Neg for &RationalClass<T> {
    type Output = RationalClass<T>;
    fn neg(self) -> RationalClass<T> {
        RationalClass::new(self.coords.iter().map(|c| -c.clone()).collect())
    }
}

impl<T: Scalar> Neg for RationalClass<T> {
    type Output = RationalClass<T>;
    fn neg(self) -> RationalClass<T> {
        -&self
    }
}

/// `{x : ⟨f, x⟩ ≥ 0 for every facet covector f}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyhedralCone<T: Scalar> {
    facets: Vec<Vec<T>>,
    generators: Option<Vec<Vec<T>>>,
}

impl<T: Scalar> PolyhedralCone<T> {
    pub fn new(facets: Vec<Vec<T>>, generators: Option<Vec<Vec<T>>>) -> Self {
        Self { facets, generators }
    }

    pub fn facets(&self) -> &[Vec<T>] {
        &self.facets
    }

    pub fn generators(&self) -> Option<&[Vec<T>]> {
        self.generators.as_deref()
    }

    pub fn contains(&self, x: &RationalClass<T>) -> bool {
        self.facets.iter().all(|f| !x.pair(f).is_negative())
    }

    pub fn contains_interior(&self, x: &RationalClass<T>) -> bool {
        self.facets.iter().all(|f| x.pair(f).is_positive())
    }
}

/// Computational model of `N¹(S)` together with `Nef(S)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NsModel<T: Scalar> {
    rank: usize,
    nef_cone: PolyhedralCone<T>,
    ample_generation_degree: Option<T>,
}

impl<T: Scalar> NsModel<T> {
    /// Validates that the declared nef cone is full-dimensional and salient.
    pub fn new(
        rank: usize,
        nef_cone: PolyhedralCone<T>,
        ample_generation_degree: Option<T>,
    ) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidModel("rank must be positive".into()));
        }
        if nef_cone.facets.is_empty() {
            return Err(Error::InvalidModel("nef cone needs at least one facet".into()));
        }
        for (i, f) in nef_cone.facets.iter().enumerate() {
            if f.len() != rank {
                return Err(Error::InvalidModel(format!(
                    "nef_facets[{i}] has length {}, expected {rank}",
                    f.len()
                )));
            }
        }
        if rank == 1 && !nef_cone.facets.iter().all(|f| f[0].is_positive()) {
            return Err(Error::InvalidModel(
                "a Picard-rank-one nef cone must be the non-negative half-line".into(),
            ));
        }
        if matrix_rank(&nef_cone.facets) != rank {
            return Err(Error::InvalidModel("nef cone is not salient (contains a line)".into()));
        }
        if !strictly_feasible(&nef_cone.facets) {
            return Err(Error::InvalidModel("nef cone is not full-dimensional".into()));
        }
        if let Some(gens) = &nef_cone.generators {
            for (i, g) in gens.iter().enumerate() {
                if g.len() != rank {
                    return Err(Error::InvalidModel(format!(
                        "nef_generators[{i}] has length {}, expected {rank}",
                        g.len()
                    )));
                }
                if !nef_cone.contains(&RationalClass::from_integers(g.clone())) {
                    return Err(Error::InvalidModel(format!(
                        "nef_generators[{i}] violates a facet inequality"
                    )));
                }
            }
        }
        if let Some(deg) = &ample_generation_degree {
            if rank != 1 {
                return Err(Error::InvalidModel(
                    "ample_generation_degree is only meaningful for Picard rank one".into(),
                ));
            }
            if !deg.is_positive() {
                return Err(Error::InvalidModel("ample_generation_degree must be positive".into()));
            }
        }
        Ok(Self { rank, nef_cone, ample_generation_degree })
    }

    /// `N¹(C) = Z` with `Nef(C) = R≥0`.
    pub fn curve() -> Self {
        Self::new(1, PolyhedralCone::new(vec![vec![T::one()]], None), Some(T::one()))
            .expect("the curve model is valid")
    }

    /// Convenience constructor from small literal facets.
    pub fn from_facets(facets: &[&[i64]]) -> Result<Self> {
        let rank = facets.first().map_or(0, |f| f.len());
        let facets = facets
            .iter()
            .map(|f| f.iter().map(|&c| lift(c)).collect())
            .collect();
        Self::new(rank, PolyhedralCone::new(facets, None), None)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nef_cone(&self) -> &PolyhedralCone<T> {
        &self.nef_cone
    }

    pub fn ample_generation_degree(&self) -> Option<&T> {
        self.ample_generation_degree.as_ref()
    }

    pub fn is_nef(&self, delta: &RationalClass<T>) -> Result<bool> {
        delta.check_len(self.rank)?;
        Ok(self.nef_cone.contains(delta))
    }

    pub fn is_ample(&self, delta: &RationalClass<T>) -> Result<bool> {
        delta.check_len(self.rank)?;
        Ok(self.nef_cone.contains_interior(delta))
    }

    /// Decides whether the integral class `theta` is a sum of two integral
    /// ample classes.
    ///
    /// Exact for ρ = 1. For ρ > 1 a class that is not ample is an exact `No`
    /// (ample + ample is ample); otherwise integral splittings with
    /// coordinates in `[-search_bound, search_bound]` are searched, and
    /// exhaustion yields `Unknown`, never `No`.
    pub fn is_sum_of_two_ample(&self, theta: &RationalClass<T>, search_bound: u32) -> Result<Ternary> {
        theta.check_len(self.rank)?;
        let coords = theta
            .integral_coords()
            .ok_or_else(|| Error::NonIntegral("the class to decompose".into()))?;

        if self.rank == 1 {
            let unit = self.ample_generation_degree.clone().unwrap_or_else(T::one);
            let twice = unit.clone() + unit;
            return Ok(Ternary::from(coords[0] >= twice));
        }

        if !self.is_ample(theta)? {
            return Ok(Ternary::No);
        }

        let bound = lift::<T>(i64::from(search_bound));
        let low = -bound.clone();
        let mut probe = vec![low.clone(); self.rank];
        loop {
            let first = RationalClass::from_integers(probe.clone());
            if self.nef_cone.contains_interior(&first) {
                let rest = theta - &first;
                if self.nef_cone.contains_interior(&rest) {
                    return Ok(Ternary::Yes);
                }
            }
            // odometer over the box
            let mut i = 0;
            loop {
                if i == self.rank {
                    return Ok(Ternary::Unknown);
                }
                if probe[i] < bound {
                    probe[i] = probe[i].clone() + T::one();
                    break;
                }
                probe[i] = low.clone();
                i += 1;
            }
        }
    }
}

/// Rank of an integer matrix over Q.
fn matrix_rank<T: Scalar>(rows: &[Vec<T>]) -> usize {
    let mut m: Vec<Vec<Q<T>>> = rows
        .iter()
        .map(|r| r.iter().cloned().map(Ratio::from_integer).collect())
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let p = m[rank][col].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col].clone() / p.clone();
                for c in col..cols {
                    let v = m[rank][c].clone() * factor.clone();
                    m[r][c] = m[r][c].clone() - v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Whether `F x > 0` has a solution, by Fourier–Motzkin elimination on the
/// equivalent system `F x ≥ 1`.
fn strictly_feasible<T: Scalar>(facets: &[Vec<T>]) -> bool {
    let n = facets.first().map_or(0, Vec::len);
    let mut rows: Vec<(Vec<Q<T>>, Q<T>)> = facets
        .iter()
        .map(|f| (f.iter().cloned().map(Ratio::from_integer).collect(), Q::one()))
        .collect();
    for var in 0..n {
        let (mut pos, mut neg, mut keep) = (Vec::new(), Vec::new(), Vec::new());
        for (coef, rhs) in rows {
            let c = coef[var].clone();
            if c.is_positive() {
                pos.push(normalize(coef, rhs, &c));
            } else if c.is_negative() {
                neg.push(normalize(coef, rhs, &-c));
            } else {
                keep.push((coef, rhs));
            }
        }
        // each normalized row has coefficient ±1 at `var`; adding cancels it
        for (pc, pr) in &pos {
            for (nc, nr) in &neg {
                let coef: Vec<Q<T>> = pc.iter().zip(nc).map(|(a, b)| a.clone() + b.clone()).collect();
                let row = (coef, pr.clone() + nr.clone());
                if !keep.contains(&row) {
                    keep.push(row);
                }
            }
        }
        rows = keep;
    }
    rows.iter().all(|(_, rhs)| !rhs.is_positive())
}

fn normalize<T: Scalar>(coef: Vec<Q<T>>, rhs: Q<T>, by: &Q<T>) -> (Vec<Q<T>>, Q<T>) {
    (coef.into_iter().map(|c| c / by.clone()).collect(), rhs / by.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q_from;
    use num_bigint::BigInt;
    use num_integer::Integer;
    use proptest::prelude::*;

    type C = RationalClass<i64>;

    fn class(coords: &[(i64, i64)]) -> C {
        RationalClass::new(coords.iter().map(|&(p, q)| q_from(p, q)).collect())
    }

    /// Least n with n·δ integral, by scanning.
    fn scan_denominator(coords: &[(i64, i64)], n_max: i64) -> i64 {
        (1..=n_max)
            .find(|n| coords.iter().all(|&(p, q)| (n * p) % q == 0))
            .expect("denominator within scan range")
    }

    #[test]
    fn denominator_examples() {
        assert_eq!(class(&[(3, 2), (5, 6)]).denominator(), 6);
        assert_eq!(C::from_i64s(&[4, -7]).denominator(), 1);
        let frozen = scan_denominator(&[(1, 4), (1, 6)], 100);
        assert_eq!(frozen, 12);
        assert_eq!(class(&[(1, 4), (1, 6)]).denominator(), frozen);
    }

    #[test]
    fn denominator_is_backend_independent() {
        let big: RationalClass<BigInt> = RationalClass::new(vec![q_from(1, 4), q_from(-1, 6)]);
        assert_eq!(big.denominator(), BigInt::from(12));
        let wide: RationalClass<i128> = RationalClass::new(vec![q_from(7, 10)]);
        assert_eq!(wide.denominator(), 10);
    }

    #[test]
    fn nef_and_ample_examples() {
        let curve = NsModel::<i64>::curve();
        let two = NsModel::<i64>::from_facets(&[&[1, 0], &[1, 1]]).unwrap();
        assert!(curve.is_nef(&C::zero(1)).unwrap());
        assert!(two.is_nef(&C::zero(2)).unwrap());
        assert!(!curve.is_ample(&C::zero(1)).unwrap());
        assert!(!curve.is_nef(&C::from_i64s(&[-1])).unwrap());
        assert!(curve.is_ample(&class(&[(1, 2)])).unwrap());
        let d = C::from_i64s(&[1, -1]);
        assert!(two.is_nef(&d).unwrap());
        assert!(!two.is_ample(&d).unwrap());
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let curve = NsModel::<i64>::curve();
        assert_eq!(
            curve.is_nef(&C::zero(2)),
            Err(Error::DimensionMismatch { expected: 1, got: 2 })
        );
    }

    #[test]
    fn model_validation() {
        // a line
        assert!(NsModel::<i64>::from_facets(&[&[1, 0], &[-1, 0]]).is_err());
        // a half-plane: not salient
        assert!(NsModel::<i64>::from_facets(&[&[1, 0]]).is_err());
        // salient but only a ray: not full-dimensional
        assert!(NsModel::<i64>::from_facets(&[&[1, 0], &[-1, 0], &[0, 1]]).is_err());
        // x ≥ 0, y ≥ 0, -x-y ≥ 0 is {0}
        assert!(NsModel::<i64>::from_facets(&[&[1, 0], &[0, 1], &[-1, -1]]).is_err());
        assert!(NsModel::<i64>::from_facets(&[&[-1]]).is_err());
        assert!(NsModel::<i64>::from_facets(&[&[1, 0], &[0, 1]]).is_ok());
        assert!(NsModel::<i64>::from_facets(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, -1]]).is_ok());
        let generators = PolyhedralCone::new(vec![vec![1, 0], vec![0, 1]], Some(vec![vec![1, -1]]));
        assert!(NsModel::new(2, generators, None).is_err());
        let bad_degree = PolyhedralCone::new(vec![vec![1, 0], vec![0, 1]], None);
        assert!(NsModel::new(2, bad_degree, Some(1)).is_err());
    }

    #[test]
    fn sum_of_two_ample_examples() {
        let curve = NsModel::<i64>::curve();
        assert_eq!(curve.is_sum_of_two_ample(&C::from_i64s(&[1]), 0).unwrap(), Ternary::No);
        assert_eq!(curve.is_sum_of_two_ample(&C::from_i64s(&[2]), 0).unwrap(), Ternary::Yes);
        let quadrant = NsModel::<i64>::from_facets(&[&[1, 0], &[0, 1]]).unwrap();
        assert_eq!(quadrant.is_sum_of_two_ample(&C::from_i64s(&[2, 2]), 3).unwrap(), Ternary::Yes);
        // (1,1) is ample but its only split candidates leave a boundary summand
        assert_eq!(quadrant.is_sum_of_two_ample(&C::from_i64s(&[1, 1]), 3).unwrap(), Ternary::Unknown);
        assert_eq!(quadrant.is_sum_of_two_ample(&C::from_i64s(&[1, 0]), 3).unwrap(), Ternary::No);
        assert!(matches!(
            curve.is_sum_of_two_ample(&class(&[(3, 2)]), 3),
            Err(Error::NonIntegral(_))
        ));
        let coarse = NsModel::new(1, PolyhedralCone::new(vec![vec![1]], None), Some(2)).unwrap();
        assert_eq!(coarse.is_sum_of_two_ample(&C::from_i64s(&[3]), 0).unwrap(), Ternary::No);
        assert_eq!(coarse.is_sum_of_two_ample(&C::from_i64s(&[4]), 0).unwrap(), Ternary::Yes);
    }

    fn small_class() -> impl Strategy<Value = Vec<(i64, i64)>> {
        prop::collection::vec((-40i64..=40, 1i64..=60), 1..4)
    }

    fn models() -> Vec<NsModel<i64>> {
        vec![
            NsModel::curve(),
            NsModel::from_facets(&[&[1, 0], &[1, 1]]).unwrap(),
            NsModel::from_facets(&[&[1, 0], &[0, 1]]).unwrap(),
            NsModel::from_facets(&[&[2, -1], &[-1, 2]]).unwrap(),
            NsModel::from_facets(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, -1]]).unwrap(),
        ]
    }

    proptest! {
        #[test]
        fn denominator_matches_scan(coords in small_class()) {
            let d = class(&coords).denominator();
            prop_assert_eq!(d, scan_denominator(&coords, 60 * 60 * 60));
        }

        #[test]
        fn denominator_of_multiple(coords in small_class(), n in 1i64..=60) {
            let delta = class(&coords);
            let d = delta.denominator();
            prop_assert_eq!(delta.scale_int(n).denominator(), d / n.gcd(&d));
        }

        #[test]
        fn ample_implies_nef_and_scaling_invariance(
            m in 0usize..5,
            raw in prop::collection::vec((-12i64..=12, 1i64..=6), 3),
            p in 1i64..=9, q in 1i64..=9,
        ) {
            let model = &models()[m];
            let delta = class(&raw[..model.rank()]);
            let nef = model.is_nef(&delta).unwrap();
            let ample = model.is_ample(&delta).unwrap();
            prop_assert!(!ample || nef);
            let scaled = delta.scale(&q_from(p, q));
            prop_assert_eq!(model.is_nef(&scaled).unwrap(), nef);
            prop_assert_eq!(model.is_ample(&scaled).unwrap(), ample);
        }

        #[test]
        fn rank_one_specialization(p in -50i64..=50, q in 1i64..=20) {
            let curve = NsModel::<i64>::curve();
            let delta = class(&[(p, q)]);
            prop_assert_eq!(curve.is_nef(&delta).unwrap(), p >= 0);
            prop_assert_eq!(curve.is_ample(&delta).unwrap(), p > 0);
        }
    }
}
