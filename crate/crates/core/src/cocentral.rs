//! Cocentral biinvariant bilinear forms on H⊗H_γ and their bijection with
//! cointegrals: Σ_λ(a⊗b) = λ(S⁻¹(α)aβS(b)), the four-choice inverse
//! λ_Σ(a) = Σ(p_μ(a⊗1)q), round trips, and the dimension counts.

use std::sync::Arc;

use crate::algebra::{DualElement, Element};
use crate::error::{Error, Result};
use crate::integral::Cointegral;
use crate::linalg::Matrix;
use crate::quasihopf::QuasiHopf;
use crate::report::ValidationReport;
use crate::scalar::Scalar;

/// A bilinear form on H⊗H_γ as a dense coefficient vector of length dim²
/// (index i·dim + j for Σ(bᵢ⊗bⱼ)).
pub struct CocentralData {
    pub sigma: Vec<Scalar>,
    /// λ₀ with λ₀(S⁻¹(α)β) = 1, when it exists
    pub normalized: Option<DualElement>,
    /// dimension of the space of cocentral biinvariant forms on H⊗H_μ
    pub space_dim: usize,
}

fn eval(sigma: &[Scalar], v: &Element) -> Scalar {
    let spec = v.spec();
    let mut acc = spec.zero();
    for (idx, c) in v.iter_nonzero() {
        if !sigma[idx].is_zero() {
            acc = &acc + &(c * &sigma[idx]);
        }
    }
    acc
}

/// (k⊗m)·Δ(a) on H⊗H_γ: (k·a₁)⊗(m·a₂); both right actions are plain
/// multiplication.
fn right_diag(h: &Arc<QuasiHopf>, v: &Element, a: usize) -> Element {
    let mut out = h.algebra().zero_elem(2);
    for (j, k, c) in h.delta_rows(a) {
        out = out.add(
            &v.mul(&h.basis(*j).tensor(&h.basis(*k)))
                .scale(c),
        );
    }
    out
}

/// Δ(a)·(k⊗m) on H⊗H_γ: (a₁·k)⊗((a₂↼γ)·m).
fn left_diag(h: &Arc<QuasiHopf>, gamma: &DualElement, v: &Element, a: usize) -> Element {
    let mut out = h.algebra().zero_elem(2);
    for (j, k, c) in h.delta_rows(a) {
        let twisted = h.hit_elem_right(&h.basis(*k), gamma);
        out = out.add(&h.basis(*j).tensor(&twisted).mul(v).scale(c));
    }
    out
}

/// Checks biinvariance and cocentrality of a form on H⊗H_γ; check names
/// follow Def 6.1.
pub fn sigma_report(
    h: &Arc<QuasiHopf>,
    gamma: &DualElement,
    sigma: &[Scalar],
) -> Result<ValidationReport> {
    if let Some(w) = h.character_witness(gamma) {
        return Err(Error::InvalidInput(format!("γ is not a character: {w}")));
    }
    let mut rep = ValidationReport::new();
    let dim = h.dim();
    assert_eq!(sigma.len(), dim * dim, "form has wrong length");

    // biinvariance
    let mut w = None;
    'bi: for a in 0..dim {
        let eps = h.eps(&h.basis(a));
        for i in 0..dim {
            for j in 0..dim {
                let km = h.basis(i).tensor(&h.basis(j));
                let lhs = eval(sigma, &right_diag(h, &km, a));
                let rhs = &eval(sigma, &km) * &eps;
                if lhs != rhs {
                    w = Some(format!(
                        "(6.1) right invariance fails at (a={}, {}⊗{})",
                        h.algebra().label(a),
                        h.algebra().label(i),
                        h.algebra().label(j)
                    ));
                    break 'bi;
                }
                let lhs = eval(sigma, &left_diag(h, gamma, &km, a));
                if lhs != rhs {
                    w = Some(format!(
                        "(6.1) left invariance fails at (a={}, {}⊗{})",
                        h.algebra().label(a),
                        h.algebra().label(i),
                        h.algebra().label(j)
                    ));
                    break 'bi;
                }
            }
        }
    }
    rep.record("(6.1):biinvariance", w);

    // cocentrality: (id⊗Σ)(φ·[Δ(k)⊗m]·φ⁻¹) = (Σ⊗id)(φ⁻¹·[k⊗T_γΔ(m)]·φ)
    let t_gamma = crate::bimodule::t_of_character(h, gamma);
    let mut w = None;
    'co: for ki in 0..dim {
        for mi in 0..dim {
            let lhs = cocentral_lhs(h, gamma, sigma, ki, mi);
            let rhs = cocentral_rhs(h, gamma, sigma, &t_gamma, ki, mi);
            if lhs != rhs {
                w = Some(format!(
                    "(6.1) cocentrality fails at ({}⊗{}): {} vs {}",
                    h.algebra().label(ki),
                    h.algebra().label(mi),
                    lhs,
                    rhs
                ));
                break 'co;
            }
        }
    }
    rep.record("(6.1):cocentrality", w);

    Ok(rep)
}

/// (id⊗Σ)(φ·[Λ(k)⊗m]·φ⁻¹) ∈ H with Λ = Δ, K-slot multiplied, M-slot
/// acted through γ on the left.
fn cocentral_lhs(
    h: &Arc<QuasiHopf>,
    gamma: &DualElement,
    sigma: &[Scalar],
    ki: usize,
    mi: usize,
) -> Element {
    let dim = h.dim();
    let mut acc = h.algebra().zero_elem(1);
    for (pidx, pc) in h.phi().iter_nonzero() {
        let z = pidx % dim;
        let y = (pidx / dim) % dim;
        let x = pidx / (dim * dim);
        for (qidx, qc) in h.phi_inv().iter_nonzero() {
            let zq = qidx % dim;
            let yq = (qidx / dim) % dim;
            let xq = qidx / (dim * dim);
            for (j, k, dc) in h.delta_rows(ki) {
                // H-slot: X·k₁·X̄; K-slot: Y·k₂·Ȳ; M-slot: (Z↼γ)·m·Z̄
                let hslot = h.basis(x).mul(&h.basis(*j)).mul(&h.basis(xq));
                let kslot = h.basis(y).mul(&h.basis(*k)).mul(&h.basis(yq));
                let mslot = h
                    .hit_elem_right(&h.basis(z), gamma)
                    .mul(&h.basis(mi))
                    .mul(&h.basis(zq));
                let s = eval(sigma, &kslot.tensor(&mslot));
                if s.is_zero() {
                    continue;
                }
                acc = acc.add(&hslot.scale(&(&(&(pc * qc) * dc) * &s)));
            }
        }
    }
    acc
}

/// (Σ⊗id)(φ⁻¹·[k⊗ρ_γ(m)]·φ) ∈ H with ρ_γ(m) = T_γΔ(m).
fn cocentral_rhs(
    h: &Arc<QuasiHopf>,
    gamma: &DualElement,
    sigma: &[Scalar],
    t_gamma: &Element,
    ki: usize,
    mi: usize,
) -> Element {
    let dim = h.dim();
    let rho_m = t_gamma.mul(&h.dl(&h.basis(mi)));
    let mut acc = h.algebra().zero_elem(1);
    for (pidx, pc) in h.phi_inv().iter_nonzero() {
        let z = pidx % dim;
        let y = (pidx / dim) % dim;
        let x = pidx / (dim * dim);
        for (qidx, qc) in h.phi().iter_nonzero() {
            let zq = qidx % dim;
            let yq = (qidx / dim) % dim;
            let xq = qidx / (dim * dim);
            for (ridx, rc) in rho_m.iter_nonzero() {
                let (m0, m1) = (ridx / dim, ridx % dim);
                // K-slot: X̄·k·X; M-slot: (Ȳ↼γ)·m₀·Y; H-slot: Z̄·m₁·Z
                let kslot = h.basis(x).mul(&h.basis(ki)).mul(&h.basis(xq));
                let mslot = h
                    .hit_elem_right(&h.basis(y), gamma)
                    .mul(&h.basis(m0))
                    .mul(&h.basis(yq));
                let hslot = h.basis(z).mul(&h.basis(m1)).mul(&h.basis(zq));
                let s = eval(sigma, &kslot.tensor(&mslot));
                if s.is_zero() {
                    continue;
                }
                acc = acc.add(&hslot.scale(&(&(&(pc * qc) * rc) * &s)));
            }
        }
    }
    acc
}

/// Dimension of the space of cocentral biinvariant forms on H⊗H_γ, via
/// the nullspace of the stacked constraint matrix.
pub fn cocentral_space_dim(h: &Arc<QuasiHopf>, gamma: &DualElement) -> Result<usize> {
    if let Some(w) = h.character_witness(gamma) {
        return Err(Error::InvalidInput(format!("γ is not a character: {w}")));
    }
    let dim = h.dim();
    let spec = h.spec();
    let t_gamma = crate::bimodule::t_of_character(h, gamma);
    let n2 = dim * dim;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();

    // biinvariance rows: one per (a, i, j) and side
    for a in 0..dim {
        let eps = h.eps(&h.basis(a));
        for i in 0..dim {
            for j in 0..dim {
                let km = h.basis(i).tensor(&h.basis(j));
                let mut row = right_diag(h, &km, a).coeffs().to_vec();
                row[i * dim + j] = &row[i * dim + j] - &eps;
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
                let mut row = left_diag(h, gamma, &km, a).coeffs().to_vec();
                row[i * dim + j] = &row[i * dim + j] - &eps;
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    // cocentrality rows: dim equations per (k, m) pair; express both sides
    // as linear functionals of Σ by evaluating on indicator forms
    let mut lhs_ops: Vec<Vec<Element>> = Vec::new();
    let mut rhs_ops: Vec<Vec<Element>> = Vec::new();
    for ki in 0..dim {
        for mi in 0..dim {
            let mut lhs_per_sigma = Vec::with_capacity(n2);
            let mut rhs_per_sigma = Vec::with_capacity(n2);
            for s in 0..n2 {
                let mut indicator = vec![spec.zero(); n2];
                indicator[s] = spec.one();
                lhs_per_sigma.push(cocentral_lhs(h, gamma, &indicator, ki, mi));
                rhs_per_sigma.push(cocentral_rhs(h, gamma, &indicator, &t_gamma, ki, mi));
            }
            lhs_ops.push(lhs_per_sigma);
            rhs_ops.push(rhs_per_sigma);
        }
    }
    for (lhs_per_sigma, rhs_per_sigma) in lhs_ops.iter().zip(&rhs_ops) {
        for out in 0..dim {
            let mut row = vec![spec.zero(); n2];
            for s in 0..n2 {
                row[s] = &lhs_per_sigma[s].coeffs()[out] - &rhs_per_sigma[s].coeffs()[out];
            }
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }

    if rows.is_empty() {
        return Ok(n2);
    }
    Ok(Matrix::from_rows(spec, &rows).nullspace().len())
}

/// Σ_λ and the full §7 suite for the computed cointegral and modulus.
pub fn cocentral_forms(
    h: &Arc<QuasiHopf>,
    co: &Cointegral,
    mu: &DualElement,
) -> Result<(CocentralData, ValidationReport)> {
    let mut rep = ValidationReport::new();
    let dim = h.dim();
    let spec = h.spec();

    // Σ_λ(a⊗b) := λ(S⁻¹(α)·a·β·S(b))
    let mut sigma = vec![spec.zero(); dim * dim];
    for (idx, entry) in sigma.iter_mut().enumerate() {
        let (a, b) = (idx / dim, idx % dim);
        let arg = h
            .sa_inv(h.alpha())
            .mul(&h.basis(a))
            .mul(h.beta())
            .mul(&h.sa(&h.basis(b)));
        *entry = co.lambda.pair(&arg);
    }

    // biinvariance + cocentrality of Σ_λ on H⊗H_μ
    rep.merge(sigma_report(h, mu, &sigma)?);

    // λ_Σ(a) := Σ(p_μ(a⊗1)q) for all four p/q choices, all equal, and
    // the round trip λ → Σ_λ → λ is exact
    let d = h.derived()?;
    let choices = [
        ("pL,qL", &d.p_l, &d.q_l),
        ("pL,qR", &d.p_l, &d.q_r),
        ("pR,qL", &d.p_r, &d.q_l),
        ("pR,qR", &d.p_r, &d.q_r),
    ];
    let mut recovered: Vec<DualElement> = Vec::new();
    for (_, p, q) in &choices {
        // p_μ := p¹⊗(p²↼μ)
        let mut p_mu = h.algebra().zero_elem(2);
        for (idx, c) in p.iter_nonzero() {
            let (p1, p2) = (idx / dim, idx % dim);
            p_mu = p_mu.add(
                &h.basis(p1)
                    .tensor(&h.hit_elem_right(&h.basis(p2), mu))
                    .scale(c),
            );
        }
        let coeffs: Vec<Scalar> = (0..dim)
            .map(|a| {
                let w = p_mu.mul(&h.basis(a).embed(&[0], 2)).mul(q);
                eval(&sigma, &w)
            })
            .collect();
        recovered.push(h.algebra().dual_elem(coeffs));
    }
    let all_equal = recovered.windows(2).all(|w| w[0] == w[1]);
    rep.record(
        "Cor6.4:choices",
        (!all_equal).then(|| "the four p/q choices disagree".to_string()),
    );
    rep.record(
        "Cor6.4:roundtrip",
        (recovered[0] != co.lambda).then(|| "λ_Σ ≠ λ".to_string()),
    );

    // Σ → λ_Σ → Σ round trip
    let lam2 = &recovered[0];
    let mut sigma2 = vec![spec.zero(); dim * dim];
    for (idx, entry) in sigma2.iter_mut().enumerate() {
        let (a, b) = (idx / dim, idx % dim);
        let arg = h
            .sa_inv(h.alpha())
            .mul(&h.basis(a))
            .mul(h.beta())
            .mul(&h.sa(&h.basis(b)));
        *entry = lam2.pair(&arg);
    }
    rep.record(
        "Thm6.2:roundtrip",
        (sigma2 != sigma).then(|| "Σ_{λ_Σ} ≠ Σ".to_string()),
    );

    // dimension of the form space on H⊗H_μ is exactly 1
    let space_dim = cocentral_space_dim(h, mu)?;
    rep.record(
        "Cor6.4:dim",
        (space_dim != 1).then(|| format!("space dimension {space_dim} ≠ 1")),
    );

    // normalized cointegral, when λ(S⁻¹(α)β) ≠ 0
    let norm = co.lambda.pair(&h.sa_inv(h.alpha()).mul(h.beta()));
    let normalized = norm.inv().map(|i| co.lambda.scale(&i));

    Ok((
        CocentralData {
            sigma,
            normalized,
            space_dim,
        },
        rep,
    ))
}
