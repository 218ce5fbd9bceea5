//! TOML descriptor files: a base variety, a bundle on it and optional ample
//! twists. Exact rationals are written as integers or `"p/q"` strings.

use anyhow::{anyhow, bail, Context, Result};
use fujita_core::bundles::{BaseVariety, BundleDescriptor, HnData, HnQuotient};
use fujita_core::nslattice::{NsModel, PolyhedralCone, RationalClass};
use fujita_core::positivity::{Twist, TwistFamily};
use fujita_core::scalar::{fmt_q, parse_q};
use fujita_core::{Rational, Ternary};
use serde::{Deserialize, Serialize};

/// A validated descriptor file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Descriptor {
    pub base: BaseVariety<i64>,
    pub bundle: BundleDescriptor<i64>,
    pub twists: Option<TwistFamily<i64>>,
}

/// An exact rational as written in a file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    fn to_q(&self, path: &str) -> Result<Rational> {
        match self {
            Num::Int(n) => Ok(Rational::from_integer(*n)),
            Num::Text(s) => parse_q(s).ok_or_else(|| anyhow!("{path}: expected an integer or \"p/q\", got {s:?}")),
        }
    }

    fn from_q(q: &Rational) -> Self {
        if q.is_integer() {
            Num::Int(*q.numer())
        } else {
            Num::Text(fmt_q(q))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescriptorDto {
    pub base: BaseDto,
    pub bundle: BundleDto,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub twists: Vec<TwistDto>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BaseDto {
    Curve {
        genus: u32,
    },
    Abelian {
        dim: u32,
        all_ample_gg: Ternary,
        exists_non_gg_ample_twist: Ternary,
        ns: NsDto,
    },
    AbelianPicardType {
        albanese_surjective: bool,
        picard_rank_one: bool,
        pi1_abelian: Ternary,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        confn_upper: Option<u32>,
        exists_non_gg_ample_twist: Ternary,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        canonical_class: Option<Vec<Num>>,
        ns: NsDto,
    },
    GenericPolarized {
        canonical_class: Vec<Num>,
        ns: NsDto,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NsDto {
    pub rank: usize,
    pub nef_facets: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ample_generation_degree: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nef_generators: Option<Vec<Vec<i64>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleDto {
    pub rank: u32,
    /// Derived from `hn` when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1: Option<Vec<i64>>,
    pub curve_semistable: bool,
    /// Defaults to what the slope denominator forces.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stable: Option<bool>,
    #[serde(default = "unknown")]
    pub sym_generic: Ternary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c2_pairing: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hn: Option<Vec<HnDto>>,
}

fn unknown() -> Ternary {
    Ternary::Unknown
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HnDto {
    pub rank: u32,
    pub degree: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistDto {
    pub m: Vec<i64>,
    pub a: u64,
}

fn class_from(nums: &[Num], path: &str) -> Result<RationalClass<i64>> {
    let coords = nums
        .iter()
        .enumerate()
        .map(|(i, n)| n.to_q(&format!("{path}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    Ok(RationalClass::new(coords))
}

fn class_to(c: &RationalClass<i64>) -> Vec<Num> {
    c.coords().iter().map(Num::from_q).collect()
}

fn integral_to(c: &RationalClass<i64>, path: &str) -> Result<Vec<i64>> {
    c.integral_coords().ok_or_else(|| anyhow!("{path} must be integral"))
}

impl NsDto {
    fn to_model(&self) -> Result<NsModel<i64>> {
        let cone = PolyhedralCone::new(self.nef_facets.clone(), self.nef_generators.clone());
        NsModel::new(self.rank, cone, self.ample_generation_degree).context("base.ns")
    }

    fn from_model(ns: &NsModel<i64>) -> Self {
        Self {
            rank: ns.rank(),
            nef_facets: ns.nef_cone().facets().to_vec(),
            ample_generation_degree: ns.ample_generation_degree().copied(),
            nef_generators: ns.nef_cone().generators().map(<[_]>::to_vec),
        }
    }
}

impl BaseDto {
    fn to_base(&self) -> Result<BaseVariety<i64>> {
        let base = match self {
            BaseDto::Curve { genus } => BaseVariety::curve(*genus),
            BaseDto::Abelian { dim, all_ample_gg, exists_non_gg_ample_twist, ns } => BaseVariety::Abelian {
                dim: *dim,
                all_ample_gg: *all_ample_gg,
                exists_non_gg_ample_twist: *exists_non_gg_ample_twist,
                ns: ns.to_model()?,
            },
            BaseDto::AbelianPicardType {
                albanese_surjective,
                picard_rank_one,
                pi1_abelian,
                confn_upper,
                exists_non_gg_ample_twist,
                canonical_class,
                ns,
            } => BaseVariety::AbelianPicardType {
                albanese_surjective: *albanese_surjective,
                picard_rank_one: *picard_rank_one,
                pi1_abelian: *pi1_abelian,
                confn_upper: *confn_upper,
                exists_non_gg_ample_twist: *exists_non_gg_ample_twist,
                canonical_class: canonical_class
                    .as_ref()
                    .map(|k| class_from(k, "base.canonical_class"))
                    .transpose()?,
                ns: ns.to_model()?,
            },
            BaseDto::GenericPolarized { canonical_class, ns } => BaseVariety::GenericPolarized {
                canonical_class: class_from(canonical_class, "base.canonical_class")?,
                ns: ns.to_model()?,
            },
        };
        base.validate().context("base")?;
        Ok(base)
    }

    fn from_base(base: &BaseVariety<i64>) -> Self {
        match base {
            BaseVariety::Curve { genus, .. } => BaseDto::Curve { genus: *genus },
            BaseVariety::Abelian { dim, all_ample_gg, exists_non_gg_ample_twist, ns } => BaseDto::Abelian {
                dim: *dim,
                all_ample_gg: *all_ample_gg,
                exists_non_gg_ample_twist: *exists_non_gg_ample_twist,
                ns: NsDto::from_model(ns),
            },
            BaseVariety::AbelianPicardType {
                albanese_surjective,
                picard_rank_one,
                pi1_abelian,
                confn_upper,
                exists_non_gg_ample_twist,
                canonical_class,
                ns,
            } => BaseDto::AbelianPicardType {
                albanese_surjective: *albanese_surjective,
                picard_rank_one: *picard_rank_one,
                pi1_abelian: *pi1_abelian,
                confn_upper: *confn_upper,
                exists_non_gg_ample_twist: *exists_non_gg_ample_twist,
                canonical_class: canonical_class.as_ref().map(class_to),
                ns: NsDto::from_model(ns),
            },
            BaseVariety::GenericPolarized { canonical_class, ns } => BaseDto::GenericPolarized {
                canonical_class: class_to(canonical_class),
                ns: NsDto::from_model(ns),
            },
        }
    }
}

impl BundleDto {
    fn to_bundle(&self, base: &BaseVariety<i64>) -> Result<BundleDescriptor<i64>> {
        let hn = match &self.hn {
            Some(qs) => {
                let quotients = qs.iter().map(|q| HnQuotient { rank: q.rank, degree: q.degree }).collect();
                Some(HnData::new(quotients).context("bundle.hn")?)
            }
            None => None,
        };
        let c1 = match (&self.c1, &hn) {
            (Some(c1), _) => RationalClass::from_i64s(c1),
            (None, Some(hn)) => RationalClass::from_i64s(&[hn.total_degree()]),
            (None, None) => bail!("bundle.c1: required unless bundle.hn is given"),
        };
        let mut e = BundleDescriptor::curve_semistable(self.rank, c1);
        e.curve_semistable = self.curve_semistable;
        e.stable = self.stable.unwrap_or(e.stable && self.curve_semistable);
        e.curve_hn = hn;
        e.sym_generic = self.sym_generic;
        e.c2_pairing = self.c2_pairing.as_ref().map(|n| n.to_q("bundle.c2_pairing")).transpose()?;
        e.validate(base).context("bundle")?;
        Ok(e)
    }

    fn from_bundle(e: &BundleDescriptor<i64>) -> Result<Self> {
        Ok(Self {
            rank: e.rank,
            c1: Some(integral_to(&e.c1, "bundle.c1")?),
            curve_semistable: e.curve_semistable,
            stable: Some(e.stable),
            sym_generic: e.sym_generic,
            c2_pairing: e.c2_pairing.as_ref().map(Num::from_q),
            hn: e
                .curve_hn
                .as_ref()
                .map(|hn| hn.quotients().iter().map(|q| HnDto { rank: q.rank, degree: q.degree }).collect()),
        })
    }
}

impl DescriptorDto {
    pub fn into_descriptor(self) -> Result<Descriptor> {
        let base = self.base.to_base()?;
        let bundle = self.bundle.to_bundle(&base)?;
        let twists = if self.twists.is_empty() {
            None
        } else {
            let family = TwistFamily::new(
                self.twists.iter().map(|t| Twist::new(RationalClass::from_i64s(&t.m), t.a)).collect(),
            );
            family.validate(&bundle, &base).context("twists")?;
            Some(family)
        };
        Ok(Descriptor { base, bundle, twists })
    }

    pub fn from_descriptor(d: &Descriptor) -> Result<Self> {
        let twists = match &d.twists {
            Some(f) => f
                .twists
                .iter()
                .enumerate()
                .map(|(i, t)| Ok(TwistDto { m: integral_to(&t.m, &format!("twists[{i}].m"))?, a: t.a }))
                .collect::<Result<_>>()?,
            None => Vec::new(),
        };
        Ok(Self { base: BaseDto::from_base(&d.base), bundle: BundleDto::from_bundle(&d.bundle)?, twists })
    }
}

/// Parses and validates; errors name the offending field.
pub fn parse_descriptor(text: &str) -> Result<Descriptor> {
    let dto: DescriptorDto = toml::from_str(text).map_err(|e| anyhow!("descriptor: {}", e.to_string().trim_end()))?;
    dto.into_descriptor()
}

/// Canonical rendering; [`parse_descriptor`] inverts it on validated input.
pub fn print_descriptor(d: &Descriptor) -> Result<String> {
    Ok(toml::to_string(&DescriptorDto::from_descriptor(d)?)?)
}

pub fn read_descriptor(path: &std::path::Path) -> Result<Descriptor> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_descriptor(&text).with_context(|| format!("in {}", path.display()))
}
