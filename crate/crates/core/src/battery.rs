//! The full invariant battery for one instance: axiom suite, derived
//! identities, bimodule-level checks, integral/Fourier/Radford/cocentral
//! sections, assembled into one serializable report.

use std::sync::Arc;

use serde::Serialize;

use crate::bimodule::{Bimodule, LeftBimodule};
use crate::cocentral::cocentral_forms;
use crate::error::Result;
use crate::integral::{
    cointegral, fourier, integral_spaces, modulus, radford, right_integral_projection,
    semisimplicity_battery, symmetry_check, SymmetryVerdict,
};
use crate::quasihopf::{QuasiHopf, DERIVED_SUITE_IDS};
use crate::report::{Check, ValidationReport};

#[derive(Debug, Clone, Serialize)]
pub struct DimReport {
    pub l: usize,
    pub r: usize,
    pub cointegrals: usize,
}

#[derive(Serialize)]
pub struct BatteryReport {
    pub field: String,
    pub dim: usize,
    pub axioms: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dims: Option<DimReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unimodular: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub semisimple: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quantum_dim: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symmetric: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radford_ok: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cocentral_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalized_cointegral: Option<Vec<String>>,
    /// every section check beyond the axiom suite, in run order
    pub checks: Vec<Check>,
    pub all_passed: bool,
}

impl BatteryReport {
    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.axioms
            .iter()
            .chain(self.checks.iter())
            .filter(|c| !c.passed)
    }
}

/// Runs everything. Sections run in dependency order and the battery
/// stops early when a section fails, leaving later fields unset.
pub fn full_battery(h: &Arc<QuasiHopf>) -> Result<BatteryReport> {
    let mut report = BatteryReport {
        field: h.spec().to_string(),
        dim: h.dim(),
        axioms: Vec::new(),
        dims: None,
        unimodular: None,
        semisimple: None,
        quantum_dim: None,
        symmetric: None,
        radford_ok: None,
        cocentral_dim: None,
        normalized_cointegral: None,
        checks: Vec::new(),
        all_passed: false,
    };

    let axioms = h.validate();
    let axioms_ok = axioms.all_passed();
    report.axioms = axioms.checks;
    if !axioms_ok {
        return Ok(report);
    }

    match h.derived() {
        Ok(_) => {
            for id in DERIVED_SUITE_IDS {
                report.axioms.push(Check {
                    id: (*id).to_string(),
                    passed: true,
                    witness: None,
                });
            }
        }
        Err(crate::error::Error::IdentityFailed { identity, witness }) => {
            for id in DERIVED_SUITE_IDS {
                if **id == identity {
                    report.axioms.push(Check {
                        id: identity.clone(),
                        passed: false,
                        witness: Some(witness),
                    });
                    return Ok(report);
                }
                report.axioms.push(Check {
                    id: (*id).to_string(),
                    passed: true,
                    witness: None,
                });
            }
            return Ok(report);
        }
        Err(e) => return Err(e),
    }

    let mut checks = ValidationReport::new();

    // bimodule layer on the regular (co)actions
    let reg = Bimodule::regular(h);
    checks.merge(reg.validate());
    checks.merge(reg.projection_report()?);
    let left_reg = LeftBimodule::regular(h);
    checks.merge(left_reg.validate());
    checks.merge(left_reg.deformed_coaction_report()?);
    let dual = left_reg.dual_bimodule()?;
    checks.merge(dual.validate());
    checks.merge(left_reg.pairing_exchange_report(&dual)?);

    // integral spaces
    let dims_ok = match integral_spaces(h, &[]) {
        Ok(spaces) => {
            report.dims = Some(DimReport {
                l: spaces.left.len(),
                r: spaces.right.len(),
                cointegrals: 0,
            });
            checks.record("Thm3.6:dims", None);
            true
        }
        Err(crate::error::Error::DimensionViolation(w)) => {
            checks.record("Thm3.6:dims", Some(w));
            false
        }
        Err(e) => return Err(e),
    };
    if !dims_ok {
        report.checks = checks.checks;
        return Ok(report);
    }

    let (co, rep) = cointegral(h)?;
    let co_ok = rep.all_passed();
    checks.merge(rep);
    if let Some(d) = report.dims.as_mut() {
        d.cointegrals = 1;
    }
    if !co_ok {
        report.checks = checks.checks;
        return Ok(report);
    }

    let (_et, rep) = right_integral_projection(h, &co)?;
    checks.merge(rep);

    let (mu, rep) = modulus(h, &co)?;
    checks.merge(rep);
    report.unimodular = Some(mu == h.counit_dual());

    let (_fd, rep) = fourier(h, &co, &mu)?;
    checks.merge(rep);

    let (ss, rep) = semisimplicity_battery(h, &co)?;
    checks.merge(rep);
    report.semisimple = Some(ss.semisimple);
    report.quantum_dim = Some(ss.quantum_dim.clone());

    let (sym, rep) = symmetry_check(h, &co, &mu)?;
    checks.merge(rep);
    report.symmetric = Some(
        match sym.verdict {
            SymmetryVerdict::Symmetric => "yes",
            SymmetryVerdict::NotUnimodular => "no (not unimodular)",
            SymmetryVerdict::NoInnerWitnessFound => "undecided (no witness found)",
        }
        .to_string(),
    );

    let (_rd, rep) = radford(h, &co, &mu)?;
    report.radford_ok = Some(rep.all_passed());
    checks.merge(rep);

    let (cf, rep) = cocentral_forms(h, &co, &mu)?;
    checks.merge(rep);
    report.cocentral_dim = Some(cf.space_dim);
    report.normalized_cointegral = cf
        .normalized
        .map(|l| l.coeffs().iter().map(|c| c.to_string()).collect());

    report.all_passed =
        report.axioms.iter().all(|c| c.passed) && checks.checks.iter().all(|c| c.passed);
    report.checks = checks.checks;
    Ok(report)
}
