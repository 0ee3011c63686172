//! Plumbing behind the `semitrace` binary: module descriptors, single
//! computations rendered as JSON, and enumeration rows.

use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::fracideal::MonomialFractionalIdeal;
use crate::graded::{present, FPGradedModule, GradedRing};
use crate::homology::{ext, tor};
use crate::semigroup::{parse_int_list, NumericalSemigroup};

/// Environment variable that overrides the default prime.
pub const PRIME_ENV: &str = "SEMITRACE_PRIME";

/// A module named on the command line.
///
/// `R/m`, `R/C`, a comma-separated ideal such as `0,1`, or `syz:` followed
/// by another descriptor for its first syzygy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleDesc {
    Ideal(Vec<i64>),
    Residue,
    ConductorQuotient,
    Syzygy(Box<ModuleDesc>),
}

impl FromStr for ModuleDesc {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("syz:") {
            return Ok(ModuleDesc::Syzygy(Box::new(rest.parse()?)));
        }
        match s {
            "R/m" | "k" => Ok(ModuleDesc::Residue),
            "R/C" => Ok(ModuleDesc::ConductorQuotient),
            _ => Ok(ModuleDesc::Ideal(parse_int_list(s)?)),
        }
    }
}

impl ModuleDesc {
    pub fn build(&self, ring: &GradedRing) -> Result<FPGradedModule> {
        let s = ring.semigroup().clone();
        Ok(match self {
            ModuleDesc::Ideal(g) => present(ring, &MonomialFractionalIdeal::new(s, g)?),
            ModuleDesc::Residue => FPGradedModule::residue_field(ring.clone()),
            ModuleDesc::ConductorQuotient => {
                FPGradedModule::cyclic_quotient(ring.clone(), &MonomialFractionalIdeal::conductor(s))
            }
            ModuleDesc::Syzygy(inner) => inner.build(ring)?.syzygy(1),
        })
    }
}

/// The `compute` subcommand kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComputeKind {
    Trace,
    Colon,
    Conductor,
    Resolve,
    ExtAnn,
    TorAnn,
    Transpose,
    EnumerateIdeals,
}

impl FromStr for ComputeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "trace" => ComputeKind::Trace,
            "colon" => ComputeKind::Colon,
            "conductor" => ComputeKind::Conductor,
            "resolve" => ComputeKind::Resolve,
            "ext-ann" => ComputeKind::ExtAnn,
            "tor-ann" => ComputeKind::TorAnn,
            "transpose" => ComputeKind::Transpose,
            "enumerate-ideals" => ComputeKind::EnumerateIdeals,
            other => return Err(Error::Parse(format!("unknown computation `{other}`"))),
        })
    }
}

/// Arguments of a single computation.
#[derive(Debug, Clone)]
pub struct ComputeArgs {
    pub semigroup: Vec<i64>,
    pub prime: u32,
    /// The module `M` (for `trace` and `colon`, an ideal).
    pub module: Option<ModuleDesc>,
    /// Second argument: the numerator of `colon`, or `N` for Ext/Tor.
    /// Defaults to `R`, `ΩM` and `transpose M` respectively.
    pub other: Option<ModuleDesc>,
    pub index: usize,
    pub length: usize,
}

fn ideal_arg(s: &Arc<NumericalSemigroup>, d: Option<&ModuleDesc>, what: &str) -> Result<MonomialFractionalIdeal> {
    match d {
        Some(ModuleDesc::Ideal(g)) => MonomialFractionalIdeal::new(s.clone(), g),
        Some(_) => Err(Error::Precondition(format!("{what} must be a fractional ideal"))),
        None => Err(Error::Precondition(format!("missing {what}"))),
    }
}

fn module_arg(ring: &GradedRing, d: Option<&ModuleDesc>) -> Result<FPGradedModule> {
    d.ok_or_else(|| Error::Precondition("missing --ideal or --module".into()))?.build(ring)
}

/// Runs one computation and returns its JSON rendering.
pub fn compute(kind: ComputeKind, args: &ComputeArgs) -> Result<Value> {
    let s = Arc::new(NumericalSemigroup::from_generators(&args.semigroup)?);
    let ring = GradedRing::new(s.clone(), PrimeField::new(args.prime)?);
    Ok(match kind {
        ComputeKind::Trace => json!({ "trace": ideal_arg(&s, args.module.as_ref(), "ideal")?.trace_ideal().generators() }),
        ComputeKind::Colon => {
            let m = ideal_arg(&s, args.module.as_ref(), "ideal")?;
            let n = match &args.other {
                None => MonomialFractionalIdeal::unit(s.clone()),
                d => ideal_arg(&s, d.as_ref(), "numerator")?,
            };
            json!({ "colon": n.colon(&m).generators() })
        }
        ComputeKind::Conductor => json!({ "conductor": MonomialFractionalIdeal::conductor(s).generators() }),
        ComputeKind::Resolve => {
            let m = module_arg(&ring, args.module.as_ref())?;
            serde_json::to_value(m.resolve(args.length).summary()).expect("summary serializes")
        }
        ComputeKind::ExtAnn | ComputeKind::TorAnn => {
            let m = module_arg(&ring, args.module.as_ref())?;
            let n = match &args.other {
                Some(d) => d.build(&ring)?,
                None if kind == ComputeKind::ExtAnn => m.syzygy(1),
                None => m.transpose(),
            };
            let h = if kind == ComputeKind::ExtAnn { ext(args.index, &m, &n)? } else { tor(args.index, &m, &n)? };
            serde_json::to_value(h.summary()).expect("summary serializes")
        }
        ComputeKind::Transpose => {
            let m = module_arg(&ring, args.module.as_ref())?;
            json!({ "transpose": m.transpose().presentation().to_json() })
        }
        ComputeKind::EnumerateIdeals => {
            let ideals: Vec<Vec<i64>> =
                MonomialFractionalIdeal::enumerate_ideals(s).iter().map(|i| i.generators().to_vec()).collect();
            json!({ "ideals": ideals })
        }
    })
}

/// One line of `semitrace enumerate`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemigroupRow {
    pub generators: Vec<i64>,
    pub frobenius: i64,
    pub genus: usize,
    pub symmetric: bool,
    pub conductor: Vec<i64>,
    pub ideals: usize,
}

pub fn enumerate_rows(max_genus: usize) -> Vec<SemigroupRow> {
    NumericalSemigroup::enumerate_by_genus(max_genus)
        .into_iter()
        .map(|s| {
            let s = Arc::new(s);
            SemigroupRow {
                generators: s.generators().to_vec(),
                frobenius: s.frobenius(),
                genus: s.genus(),
                symmetric: s.is_symmetric(),
                conductor: MonomialFractionalIdeal::conductor(s.clone()).generators().to_vec(),
                ideals: MonomialFractionalIdeal::enumerate_ideals(s).len(),
            }
        })
        .collect()
}
