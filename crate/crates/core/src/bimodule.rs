//! Quasi-Hopf H-bimodules: construction from left modules, the projection
//! E onto coinvariants, the adjoint action, the structure isomorphism ν,
//! and the dual right bimodule of a left bimodule.

use std::sync::Arc;

use crate::algebra::{DualElement, Element};
use crate::error::{Error, Result};
use crate::linalg::{coords_in_span, echelon_basis, Matrix};
use crate::quasihopf::QuasiHopf;
use crate::report::ValidationReport;
use crate::scalar::{FieldSpec, Scalar};

pub(crate) fn unit_vec(spec: FieldSpec, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![spec.zero(); n];
    v[i] = spec.one();
    v
}

fn check_character(h: &Arc<QuasiHopf>, gamma: &DualElement) -> Result<()> {
    let dim = h.dim();
    for a in 0..dim {
        for b in 0..dim {
            let prod = h.basis(a).mul(&h.basis(b));
            let lhs = gamma.pair(&prod);
            let rhs = &gamma.pair(&h.basis(a)) * &gamma.pair(&h.basis(b));
            if lhs != rhs {
                return Err(Error::InvalidInput(format!(
                    "not an algebra map: fails at ({}, {})",
                    h.algebra().label(a),
                    h.algebra().label(b)
                )));
            }
        }
    }
    if !gamma.pair(&h.unit()).is_one() {
        return Err(Error::InvalidInput("character has γ(1) ≠ 1".into()));
    }
    Ok(())
}

/// A left H-module (V, ▷).
pub struct LeftModule {
    h: Arc<QuasiHopf>,
    vdim: usize,
    /// H⊗V → V, column index a·vdim + v
    act: Matrix,
}

impl LeftModule {
    pub fn new(h: Arc<QuasiHopf>, vdim: usize, act: Matrix) -> Self {
        assert_eq!(act.rows(), vdim);
        assert_eq!(act.cols(), h.dim() * vdim);
        LeftModule { h, vdim, act }
    }

    /// H acting on itself by left multiplication.
    pub fn regular(h: &Arc<QuasiHopf>) -> Self {
        let dim = h.dim();
        let mut act = Matrix::zero(h.spec(), dim, dim * dim);
        for a in 0..dim {
            for v in 0..dim {
                for (k, c) in h.algebra().basis_product(a, v) {
                    act.set(*k, a * dim + v, c.clone());
                }
            }
        }
        LeftModule::new(Arc::clone(h), dim, act)
    }

    /// One-dimensional module given by a character.
    pub fn from_character(h: &Arc<QuasiHopf>, gamma: &DualElement) -> Result<Self> {
        check_character(h, gamma)?;
        let dim = h.dim();
        let mut act = Matrix::zero(h.spec(), 1, dim);
        for a in 0..dim {
            act.set(0, a, gamma.coeffs()[a].clone());
        }
        Ok(LeftModule::new(Arc::clone(h), 1, act))
    }

    pub fn vdim(&self) -> usize {
        self.vdim
    }
    pub fn quasi_hopf(&self) -> &Arc<QuasiHopf> {
        &self.h
    }

    pub fn act(&self, a: &Element, v: &[Scalar]) -> Vec<Scalar> {
        let spec = self.h.spec();
        let mut out = vec![spec.zero(); self.vdim];
        for (hh, c) in a.iter_nonzero() {
            for (vi, x) in v.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let col = hh * self.vdim + vi;
                for r in 0..self.vdim {
                    let m = self.act.at(r, col);
                    if !m.is_zero() {
                        out[r] = &out[r] + &(&(c * x) * m);
                    }
                }
            }
        }
        out
    }

    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::new();
        let h = &self.h;
        let dim = h.dim();
        let spec = h.spec();
        let mut unital = None;
        for v in 0..self.vdim {
            let ev = unit_vec(spec, self.vdim, v);
            if self.act(&h.unit(), &ev) != ev {
                unital = Some(format!("1▷e{v} ≠ e{v}"));
                break;
            }
        }
        rep.record("module:unital", unital);
        let mut assoc = None;
        'outer: for a in 0..dim {
            for b in 0..dim {
                let ab = h.basis(a).mul(&h.basis(b));
                for v in 0..self.vdim {
                    let ev = unit_vec(spec, self.vdim, v);
                    if self.act(&ab, &ev) != self.act(&h.basis(a), &self.act(&h.basis(b), &ev)) {
                        assoc = Some(format!(
                            "action not multiplicative at ({}, {}, e{v})",
                            h.algebra().label(a),
                            h.algebra().label(b)
                        ));
                        break 'outer;
                    }
                }
            }
        }
        rep.record("module:assoc", assoc);
        rep
    }
}

/// Basis of E(M) together with the projector matrix.
pub struct Coinvariants {
    pub basis: Vec<Vec<Scalar>>,
    pub projector: Matrix,
}

/// The structure isomorphism ν: M^{coH}⊗H → M and its inverse.
pub struct NuMaps {
    pub nu: Matrix,
    pub nu_inv: Matrix,
}

/// A right quasi-Hopf H-bimodule: commuting unital H-actions and a right
/// H-coaction ρ: M → M⊗H that is an H-bimodule map and is
/// quasi-coassociative up to φ.
pub struct Bimodule {
    h: Arc<QuasiHopf>,
    mdim: usize,
    /// H⊗M → M, column index a·mdim + m
    left: Matrix,
    /// M⊗H → M, column index m·dim + a
    right: Matrix,
    /// M → M⊗H, row index m·dim + a
    rho: Matrix,
}

impl Bimodule {
    pub fn new(h: Arc<QuasiHopf>, mdim: usize, left: Matrix, right: Matrix, rho: Matrix) -> Self {
        let dim = h.dim();
        assert_eq!((left.rows(), left.cols()), (mdim, dim * mdim));
        assert_eq!((right.rows(), right.cols()), (mdim, mdim * dim));
        assert_eq!((rho.rows(), rho.cols()), (mdim * dim, mdim));
        Bimodule {
            h,
            mdim,
            left,
            right,
            rho,
        }
    }

    /// (H, Δ) with both actions given by multiplication.
    pub fn regular(h: &Arc<QuasiHopf>) -> Self {
        let dim = h.dim();
        let spec = h.spec();
        let mut left = Matrix::zero(spec, dim, dim * dim);
        let mut right = Matrix::zero(spec, dim, dim * dim);
        for a in 0..dim {
            for m in 0..dim {
                for (k, c) in h.algebra().basis_product(a, m) {
                    left.set(*k, a * dim + m, c.clone());
                }
                for (k, c) in h.algebra().basis_product(m, a) {
                    right.set(*k, m * dim + a, c.clone());
                }
            }
        }
        let rho = h.delta_map().matrix().clone();
        Bimodule::new(Arc::clone(h), dim, left, right, rho)
    }

    /// Lemma-2.2 structure on V⊗H: a·(v⊗x)·b = (a₁▷v)⊗a₂xb and
    /// ρ(v⊗x) = (X̄▷v)⊗(Ȳx₍₁₎)⊗(Z̄x₍₂₎).
    pub fn from_left_module(v: &LeftModule) -> Self {
        let h = &v.h;
        let dim = h.dim();
        let spec = h.spec();
        let vdim = v.vdim;
        let mdim = vdim * dim;
        let idx = |vi: usize, x: usize| vi * dim + x;

        let mut left = Matrix::zero(spec, mdim, dim * mdim);
        for a in 0..dim {
            for vi in 0..vdim {
                let ev = unit_vec(spec, vdim, vi);
                for x in 0..dim {
                    let col = a * mdim + idx(vi, x);
                    for (j, k, c) in h.delta_rows(a) {
                        let av = v.act(&h.basis(*j), &ev);
                        for (r, coef) in av.iter().enumerate() {
                            if coef.is_zero() {
                                continue;
                            }
                            for (kk, cc) in h.algebra().basis_product(*k, x) {
                                let val = &(left.at(idx(r, *kk), col) + &(&(c * coef) * cc));
                                left.set(idx(r, *kk), col, val.clone());
                            }
                        }
                    }
                }
            }
        }

        let mut right = Matrix::zero(spec, mdim, mdim * dim);
        for vi in 0..vdim {
            for x in 0..dim {
                for b in 0..dim {
                    let col = idx(vi, x) * dim + b;
                    for (k, c) in h.algebra().basis_product(x, b) {
                        right.set(idx(vi, *k), col, c.clone());
                    }
                }
            }
        }

        let mut rho = Matrix::zero(spec, mdim * dim, mdim);
        for vi in 0..vdim {
            let ev = unit_vec(spec, vdim, vi);
            for x in 0..dim {
                let col = idx(vi, x);
                for (pidx, c) in h.phi_inv().iter_nonzero() {
                    let r = pidx % dim;
                    let q = (pidx / dim) % dim;
                    let p = pidx / (dim * dim);
                    let pv = v.act(&h.basis(p), &ev);
                    for (j, k, dc) in h.delta_rows(x) {
                        for (qq, qc) in h.algebra().basis_product(q, *j) {
                            for (rr, rc) in h.algebra().basis_product(r, *k) {
                                for (vr, vc) in pv.iter().enumerate() {
                                    if vc.is_zero() {
                                        continue;
                                    }
                                    let row = idx(vr, *qq) * dim + rr;
                                    let add = &(&(&(c * dc) * qc) * rc) * vc;
                                    let val = &(rho.at(row, col) + &add);
                                    rho.set(row, col, val.clone());
                                }
                            }
                        }
                    }
                }
            }
        }
        Bimodule::new(Arc::clone(h), mdim, left, right, rho)
    }

    /// Cor-2.3 structure H_γ: carrier H, a·x·b = (a↼γ)xb,
    /// ρ_γ(x) = T_γ·Δ(x) with T_γ = γ(X̄)Ȳ⊗Z̄.
    pub fn h_gamma(h: &Arc<QuasiHopf>, gamma: &DualElement) -> Result<Self> {
        check_character(h, gamma)?;
        let dim = h.dim();
        let spec = h.spec();
        let mut left = Matrix::zero(spec, dim, dim * dim);
        for a in 0..dim {
            let hit = h.hit_elem_right(&h.basis(a), gamma);
            for m in 0..dim {
                let img = hit.mul(&h.basis(m));
                for (k, c) in img.iter_nonzero() {
                    left.set(k, a * dim + m, c.clone());
                }
            }
        }
        let mut right = Matrix::zero(spec, dim, dim * dim);
        for m in 0..dim {
            for b in 0..dim {
                for (k, c) in h.algebra().basis_product(m, b) {
                    right.set(*k, m * dim + b, c.clone());
                }
            }
        }
        let t_gamma = t_of_character(h, gamma);
        let mut rho = Matrix::zero(spec, dim * dim, dim);
        for x in 0..dim {
            let img = t_gamma.mul(&h.dl(&h.basis(x)));
            for (i, c) in img.iter_nonzero() {
                rho.set(i, x, c.clone());
            }
        }
        Ok(Bimodule::new(Arc::clone(h), dim, left, right, rho))
    }

    pub fn quasi_hopf(&self) -> &Arc<QuasiHopf> {
        &self.h
    }
    pub fn mdim(&self) -> usize {
        self.mdim
    }

    pub fn act_left(&self, a: &Element, m: &[Scalar]) -> Vec<Scalar> {
        let spec = self.h.spec();
        let mut out = vec![spec.zero(); self.mdim];
        for (hh, c) in a.iter_nonzero() {
            for (mi, x) in m.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let col = hh * self.mdim + mi;
                for r in 0..self.mdim {
                    let v = self.left.at(r, col);
                    if !v.is_zero() {
                        out[r] = &out[r] + &(&(c * x) * v);
                    }
                }
            }
        }
        out
    }

    pub fn act_right(&self, m: &[Scalar], a: &Element) -> Vec<Scalar> {
        let spec = self.h.spec();
        let dim = self.h.dim();
        let mut out = vec![spec.zero(); self.mdim];
        for (hh, c) in a.iter_nonzero() {
            for (mi, x) in m.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let col = mi * dim + hh;
                for r in 0..self.mdim {
                    let v = self.right.at(r, col);
                    if !v.is_zero() {
                        out[r] = &out[r] + &(&(c * x) * v);
                    }
                }
            }
        }
        out
    }

    pub fn coaction(&self, m: &[Scalar]) -> Vec<Scalar> {
        self.rho.mul_vec(m)
    }

    // ---- helpers on M⊗H vectors (index m·dim + a) ----

    fn mh_m_left(&self, v: &[Scalar], a: &Element) -> Vec<Scalar> {
        let dim = self.h.dim();
        let mut out = vec![self.h.spec().zero(); v.len()];
        for x in 0..dim {
            let slice: Vec<Scalar> = (0..self.mdim).map(|m| v[m * dim + x].clone()).collect();
            for (m, c) in self.act_left(a, &slice).into_iter().enumerate() {
                out[m * dim + x] = c;
            }
        }
        out
    }

    fn mh_m_right(&self, v: &[Scalar], a: &Element) -> Vec<Scalar> {
        let dim = self.h.dim();
        let mut out = vec![self.h.spec().zero(); v.len()];
        for x in 0..dim {
            let slice: Vec<Scalar> = (0..self.mdim).map(|m| v[m * dim + x].clone()).collect();
            for (m, c) in self.act_right(&slice, a).into_iter().enumerate() {
                out[m * dim + x] = c;
            }
        }
        out
    }

    fn mh_h_left(&self, v: &[Scalar], a: &Element) -> Vec<Scalar> {
        let dim = self.h.dim();
        let mut out = vec![self.h.spec().zero(); v.len()];
        for (mi, chunk) in v.chunks(dim).enumerate() {
            let x = self.h.algebra().elem(1, chunk.to_vec());
            for (k, c) in a.mul(&x).iter_nonzero() {
                out[mi * dim + k] = &out[mi * dim + k] + c;
            }
        }
        out
    }

    fn mh_h_right(&self, v: &[Scalar], a: &Element) -> Vec<Scalar> {
        let dim = self.h.dim();
        let mut out = vec![self.h.spec().zero(); v.len()];
        for (mi, chunk) in v.chunks(dim).enumerate() {
            let x = self.h.algebra().elem(1, chunk.to_vec());
            for (k, c) in x.mul(a).iter_nonzero() {
                out[mi * dim + k] = &out[mi * dim + k] + c;
            }
        }
        out
    }

    /// Δ(b_i)·v in M⊗H.
    pub(crate) fn mh_delta_left(&self, v: &[Scalar], i: usize) -> Vec<Scalar> {
        let mut out = vec![self.h.spec().zero(); v.len()];
        for (j, k, c) in self.h.delta_rows(i) {
            let t = self.mh_h_left(&self.mh_m_left(v, &self.h.basis(*j)), &self.h.basis(*k));
            for (o, x) in out.iter_mut().zip(t) {
                *o = &*o + &(&x * c);
            }
        }
        out
    }

    /// v·Δ(b_i) in M⊗H.
    pub(crate) fn mh_delta_right(&self, v: &[Scalar], i: usize) -> Vec<Scalar> {
        let mut out = vec![self.h.spec().zero(); v.len()];
        for (j, k, c) in self.h.delta_rows(i) {
            let t = self.mh_h_right(&self.mh_m_right(v, &self.h.basis(*j)), &self.h.basis(*k));
            for (o, x) in out.iter_mut().zip(t) {
                *o = &*o + &(&x * c);
            }
        }
        out
    }

    // ---- helpers on M⊗H⊗H vectors (index (m·dim + x)·dim + y) ----

    fn mhh_elem3_left(&self, v: &[Scalar], e3: &Element) -> Vec<Scalar> {
        let dim = self.h.dim();
        let spec = self.h.spec();
        let mut out = vec![spec.zero(); v.len()];
        for (pidx, c) in e3.iter_nonzero() {
            let z = pidx % dim;
            let y = (pidx / dim) % dim;
            let x = pidx / (dim * dim);
            for (vi, coef) in v.iter().enumerate() {
                if coef.is_zero() {
                    continue;
                }
                let hz = vi % dim;
                let hy = (vi / dim) % dim;
                let mi = vi / (dim * dim);
                let am = self.act_left(&self.h.basis(x), &unit_vec(spec, self.mdim, mi));
                let py = self.h.basis(y).mul(&self.h.basis(hy));
                let pz = self.h.basis(z).mul(&self.h.basis(hz));
                for (mr, mc) in am.iter().enumerate() {
                    if mc.is_zero() {
                        continue;
                    }
                    for (yi, yc) in py.iter_nonzero() {
                        for (zi, zc) in pz.iter_nonzero() {
                            let row = (mr * dim + yi) * dim + zi;
                            out[row] = &out[row] + &(&(&(&(c * coef) * mc) * yc) * zc);
                        }
                    }
                }
            }
        }
        out
    }

    fn mhh_elem3_right(&self, v: &[Scalar], e3: &Element) -> Vec<Scalar> {
        let dim = self.h.dim();
        let spec = self.h.spec();
        let mut out = vec![spec.zero(); v.len()];
        for (pidx, c) in e3.iter_nonzero() {
            let z = pidx % dim;
            let y = (pidx / dim) % dim;
            let x = pidx / (dim * dim);
            for (vi, coef) in v.iter().enumerate() {
                if coef.is_zero() {
                    continue;
                }
                let hz = vi % dim;
                let hy = (vi / dim) % dim;
                let mi = vi / (dim * dim);
                let am = self.act_right(&unit_vec(spec, self.mdim, mi), &self.h.basis(x));
                let py = self.h.basis(hy).mul(&self.h.basis(y));
                let pz = self.h.basis(hz).mul(&self.h.basis(z));
                for (mr, mc) in am.iter().enumerate() {
                    if mc.is_zero() {
                        continue;
                    }
                    for (yi, yc) in py.iter_nonzero() {
                        for (zi, zc) in pz.iter_nonzero() {
                            let row = (mr * dim + yi) * dim + zi;
                            out[row] = &out[row] + &(&(&(&(c * coef) * mc) * yc) * zc);
                        }
                    }
                }
            }
        }
        out
    }

    /// Def-2.1 axiom report.
    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::new();
        let h = &self.h;
        let dim = h.dim();
        let spec = h.spec();

        let mut w = None;
        for m in 0..self.mdim {
            let em = unit_vec(spec, self.mdim, m);
            if self.act_left(&h.unit(), &em) != em || self.act_right(&em, &h.unit()) != em {
                w = Some(format!("unit action fails on e{m}"));
                break;
            }
        }
        rep.record("Def2.1:unital", w);

        let mut w = None;
        'assoc: for a in 0..dim {
            for b in 0..dim {
                let ab = h.basis(a).mul(&h.basis(b));
                for m in 0..self.mdim {
                    let em = unit_vec(spec, self.mdim, m);
                    if self.act_left(&ab, &em)
                        != self.act_left(&h.basis(a), &self.act_left(&h.basis(b), &em))
                    {
                        w = Some(format!("left action not associative at ({a},{b},e{m})"));
                        break 'assoc;
                    }
                    if self.act_right(&self.act_right(&em, &h.basis(a)), &h.basis(b))
                        != self.act_right(&em, &ab)
                    {
                        w = Some(format!("right action not associative at (e{m},{a},{b})"));
                        break 'assoc;
                    }
                    if self.act_right(&self.act_left(&h.basis(a), &em), &h.basis(b))
                        != self.act_left(&h.basis(a), &self.act_right(&em, &h.basis(b)))
                    {
                        w = Some(format!("actions do not commute at ({a},e{m},{b})"));
                        break 'assoc;
                    }
                }
            }
        }
        rep.record("Def2.1:actions", w);

        let mut w = None;
        'bimap: for a in 0..dim {
            for m in 0..self.mdim {
                let em = unit_vec(spec, self.mdim, m);
                if self.coaction(&self.act_left(&h.basis(a), &em))
                    != self.mh_delta_left(&self.coaction(&em), a)
                {
                    w = Some(format!(
                        "ρ({}·e{m}) ≠ Δ({})·ρ(e{m})",
                        h.algebra().label(a),
                        h.algebra().label(a)
                    ));
                    break 'bimap;
                }
                if self.coaction(&self.act_right(&em, &h.basis(a)))
                    != self.mh_delta_right(&self.coaction(&em), a)
                {
                    w = Some(format!(
                        "ρ(e{m}·{}) ≠ ρ(e{m})·Δ({})",
                        h.algebra().label(a),
                        h.algebra().label(a)
                    ));
                    break 'bimap;
                }
            }
        }
        rep.record("Def2.1:bimodule-map", w);

        let mut w = None;
        for m in 0..self.mdim {
            let em = unit_vec(spec, self.mdim, m);
            let cm = self.coaction(&em);
            let mut back = vec![spec.zero(); self.mdim];
            for (mi, chunk) in cm.chunks(dim).enumerate() {
                let x = h.algebra().elem(1, chunk.to_vec());
                back[mi] = &back[mi] + &h.eps(&x);
            }
            if back != em {
                w = Some(format!("(id⊗ε)ρ(e{m}) ≠ e{m}"));
                break;
            }
        }
        rep.record("(2.1)", w);

        let mut w = None;
        for m in 0..self.mdim {
            let em = unit_vec(spec, self.mdim, m);
            let cm = self.coaction(&em);
            // (ρ⊗id)(ρ(m))
            let mut a1 = vec![spec.zero(); self.mdim * dim * dim];
            for (vi, c) in cm.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (mi, hh) = (vi / dim, vi % dim);
                for (wi, cc) in self.coaction(&unit_vec(spec, self.mdim, mi)).iter().enumerate() {
                    if cc.is_zero() {
                        continue;
                    }
                    let (mj, hk) = (wi / dim, wi % dim);
                    let row = (mj * dim + hk) * dim + hh;
                    a1[row] = &a1[row] + &(c * cc);
                }
            }
            // (id⊗Δ)(ρ(m))
            let mut a2 = vec![spec.zero(); self.mdim * dim * dim];
            for (vi, c) in cm.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (mi, hh) = (vi / dim, vi % dim);
                for (j, k, cc) in h.delta_rows(hh) {
                    let row = (mi * dim + j) * dim + k;
                    a2[row] = &a2[row] + &(c * cc);
                }
            }
            if self.mhh_elem3_left(&a1, h.phi()) != self.mhh_elem3_right(&a2, h.phi()) {
                w = Some(format!("quasi-coassociativity fails at e{m}"));
                break;
            }
        }
        rep.record("(2.2)", w);

        rep
    }

    /// E(m) := q_R¹·m₍₀₎·βS(q_R²m₍₁₎).
    pub fn project(&self, m: &[Scalar]) -> Result<Vec<Scalar>> {
        let h = &self.h;
        let d = h.derived()?;
        let dim = h.dim();
        let spec = h.spec();
        let cm = self.coaction(m);
        let mut out = vec![spec.zero(); self.mdim];
        for (qidx, qc) in d.q_r.iter_nonzero() {
            let (q1, q2) = (qidx / dim, qidx % dim);
            for (vi, c) in cm.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (mi, hh) = (vi / dim, vi % dim);
                let tail = h.beta().mul(&h.sa(&h.basis(q2).mul(&h.basis(hh))));
                let acted = self.act_right(
                    &self.act_left(&h.basis(q1), &unit_vec(spec, self.mdim, mi)),
                    &tail,
                );
                for (r, x) in acted.iter().enumerate() {
                    if !x.is_zero() {
                        out[r] = &out[r] + &(&(qc * c) * x);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn projector(&self) -> Result<Matrix> {
        let spec = self.h.spec();
        let mut e = Matrix::zero(spec, self.mdim, self.mdim);
        for m in 0..self.mdim {
            let img = self.project(&unit_vec(spec, self.mdim, m))?;
            for (r, c) in img.into_iter().enumerate() {
                e.set(r, m, c);
            }
        }
        Ok(e)
    }

    /// a▷m := E(a·m).
    pub fn adjoint(&self, a: &Element, m: &[Scalar]) -> Result<Vec<Scalar>> {
        self.project(&self.act_left(a, m))
    }

    /// Checks Prop 2.3 (i)–(vii) on all basis vectors.
    pub fn projection_report(&self) -> Result<ValidationReport> {
        let mut rep = ValidationReport::new();
        let h = &self.h;
        let dim = h.dim();
        let spec = h.spec();
        let e = self.projector()?;

        let mut w = None;
        'i: for m in 0..self.mdim {
            let em = unit_vec(spec, self.mdim, m);
            for a in 0..dim {
                let lhs = e.mul_vec(&self.act_right(&em, &h.basis(a)));
                let eps = h.eps(&h.basis(a));
                let rhs: Vec<Scalar> = e.mul_vec(&em).iter().map(|x| x * &eps).collect();
                if lhs != rhs {
                    w = Some(format!("E(e{m}·{}) ≠ E(e{m})ε", h.algebra().label(a)));
                    break 'i;
                }
            }
        }
        rep.record("(2.3.i)", w);

        rep.record("(2.3.ii)", ((&e * &e) != e).then(|| "E² ≠ E".to_string()));

        let mut w = None;
        'iii: for m in 0..self.mdim {
            let em = unit_vec(spec, self.mdim, m);
            for a in 0..dim {
                let lhs = self.adjoint(&h.basis(a), &e.mul_vec(&em))?;
                let rhs = e.mul_vec(&self.act_left(&h.basis(a), &em));
                if lhs != rhs {
                    w = Some(format!("a▷E(m) ≠ E(a·m) at ({}, e{m})", h.algebra().label(a)));
                    break 'iii;
                }
            }
        }
        rep.record("(2.3.iii)", w);

        let mut w = None;
        'iv: for a in 0..dim {
            for b in 0..dim {
                let ab = h.basis(a).mul(&h.basis(b));
                for m in 0..self.mdim {
                    let em = unit_vec(spec, self.mdim, m);
                    let lhs = self.adjoint(&ab, &em)?;
                    let rhs = self.adjoint(&h.basis(a), &self.adjoint(&h.basis(b), &em)?)?;
                    if lhs != rhs {
                        w = Some(format!("(ab)▷m ≠ a▷(b▷m) at ({a},{b},e{m})"));
                        break 'iv;
                    }
                }
            }
        }
        rep.record("(2.3.iv)", w);

        let mut w = None;
        'v: for a in 0..dim {
            for m in 0..self.mdim {
                let em = e.mul_vec(&unit_vec(spec, self.mdim, m));
                let lhs = self.act_left(&h.basis(a), &em);
                let mut rhs = vec![spec.zero(); self.mdim];
                for (j, k, c) in h.delta_rows(a) {
                    let t = self.act_right(&self.adjoint(&h.basis(*j), &em)?, &h.basis(*k));
                    for (o, x) in rhs.iter_mut().zip(t) {
                        *o = &*o + &(&x * c);
                    }
                }
                if lhs != rhs {
                    w = Some(format!(
                        "a·E(m) ≠ [a₁▷E(m)]·a₂ at ({}, e{m})",
                        h.algebra().label(a)
                    ));
                    break 'v;
                }
            }
        }
        rep.record("(2.3.v)", w);

        let mut w = None;
        for m in 0..self.mdim {
            let em = unit_vec(spec, self.mdim, m);
            let cm = self.coaction(&em);
            let mut acc = vec![spec.zero(); self.mdim];
            for (vi, c) in cm.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (mi, hh) = (vi / dim, vi % dim);
                let t = self.act_right(&e.mul_vec(&unit_vec(spec, self.mdim, mi)), &h.basis(hh));
                for (o, x) in acc.iter_mut().zip(t) {
                    *o = &*o + &(&x * c);
                }
            }
            if acc != em {
                w = Some(format!("E(m₀)·m₁ ≠ m at e{m}"));
                break;
            }
        }
        rep.record("(2.3.vi)", w);

        let mut w = None;
        for m in 0..self.mdim {
            let em = e.mul_vec(&unit_vec(spec, self.mdim, m));
            let cm = self.coaction(&em);
            let mut lhs = vec![spec.zero(); self.mdim * dim];
            for (vi, c) in cm.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (mi, hh) = (vi / dim, vi % dim);
                for (r, x) in e.mul_vec(&unit_vec(spec, self.mdim, mi)).iter().enumerate() {
                    if !x.is_zero() {
                        lhs[r * dim + hh] = &lhs[r * dim + hh] + &(c * x);
                    }
                }
            }
            let mut rhs = vec![spec.zero(); self.mdim * dim];
            for (r, x) in em.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (hh, u) in self.h.unit().iter_nonzero() {
                    rhs[r * dim + hh] = &rhs[r * dim + hh] + &(x * u);
                }
            }
            if lhs != rhs {
                w = Some(format!("E(E(m)₀)⊗E(m)₁ ≠ E(m)⊗1 at e{m}"));
                break;
            }
        }
        rep.record("(2.3.vii)", w);

        Ok(rep)
    }

    /// Image of E, with the fixed-space and Cor-2.6 characterizations
    /// verified to agree.
    pub fn coinvariants(&self) -> Result<Coinvariants> {
        let h = &self.h;
        let dim = h.dim();
        let spec = h.spec();
        let e = self.projector()?;
        let cols: Vec<Vec<Scalar>> = (0..self.mdim)
            .map(|m| e.mul_vec(&unit_vec(spec, self.mdim, m)))
            .collect();
        let basis = echelon_basis(spec, &cols);

        let fixed = (&e - &Matrix::identity(spec, self.mdim)).nullspace();
        if fixed != basis {
            return Err(Error::Validation(
                "image of E differs from its fixed space".into(),
            ));
        }

        for n in &basis {
            let lhs = self.coaction(n);
            let mut rhs = vec![spec.zero(); self.mdim * dim];
            for (pidx, c) in h.phi_inv().iter_nonzero() {
                let r = pidx % dim;
                let q = (pidx / dim) % dim;
                let p = pidx / (dim * dim);
                let t = self.act_right(&self.adjoint(&h.basis(p), n)?, &h.basis(q));
                for (mi, x) in t.iter().enumerate() {
                    if !x.is_zero() {
                        rhs[mi * dim + r] = &rhs[mi * dim + r] + &(c * x);
                    }
                }
            }
            if lhs != rhs {
                return Err(Error::IdentityFailed {
                    identity: "Cor2.6".into(),
                    witness: "coinvariant fails the coaction characterization".into(),
                });
            }
        }
        Ok(Coinvariants {
            basis,
            projector: e,
        })
    }

    /// The adjoint action restricted to coinvariants, as a LeftModule.
    pub fn coinvariant_module(&self, coinv: &Coinvariants) -> Result<LeftModule> {
        let h = &self.h;
        let dim = h.dim();
        let spec = h.spec();
        let k = coinv.basis.len();
        let mut act = Matrix::zero(spec, k, dim * k);
        for a in 0..dim {
            for (j, n) in coinv.basis.iter().enumerate() {
                let img = self.adjoint(&h.basis(a), n)?;
                let coords = coords_in_span(spec, &coinv.basis, &img).ok_or_else(|| {
                    Error::Validation("adjoint action leaves the coinvariants".into())
                })?;
                for (r, c) in coords.into_iter().enumerate() {
                    act.set(r, a * k + j, c);
                }
            }
        }
        Ok(LeftModule::new(Arc::clone(h), k, act))
    }

    /// ν: N⊗H → M, n⊗a ↦ n·a, verified to be an isomorphism of quasi-Hopf
    /// bimodules with ν⁻¹(m) = E(m₍₀₎)⊗m₍₁₎.
    pub fn nu(&self) -> Result<NuMaps> {
        let h = &self.h;
        let dim = h.dim();
        let spec = h.spec();
        let coinv = self.coinvariants()?;
        let k = coinv.basis.len();
        let e = &coinv.projector;

        let mut nu = Matrix::zero(spec, self.mdim, k * dim);
        for (j, n) in coinv.basis.iter().enumerate() {
            for a in 0..dim {
                let img = self.act_right(n, &h.basis(a));
                for (r, c) in img.into_iter().enumerate() {
                    nu.set(r, j * dim + a, c);
                }
            }
        }

        let mut nu_inv = Matrix::zero(spec, k * dim, self.mdim);
        for m in 0..self.mdim {
            let cm = self.coaction(&unit_vec(spec, self.mdim, m));
            for (vi, c) in cm.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (mi, hh) = (vi / dim, vi % dim);
                let proj = e.mul_vec(&unit_vec(spec, self.mdim, mi));
                let coords = coords_in_span(spec, &coinv.basis, &proj)
                    .ok_or_else(|| Error::Validation("E image leaves the coinvariant span".into()))?;
                for (j, x) in coords.iter().enumerate() {
                    if !x.is_zero() {
                        let v = &(nu_inv.at(j * dim + hh, m) + &(c * x));
                        nu_inv.set(j * dim + hh, m, v.clone());
                    }
                }
            }
        }

        if &nu * &nu_inv != Matrix::identity(spec, self.mdim)
            || &nu_inv * &nu != Matrix::identity(spec, k * dim)
        {
            return Err(Error::IdentityFailed {
                identity: "Thm2.7".into(),
                witness: "ν and ν⁻¹ are not mutually inverse".into(),
            });
        }

        // intertwiner checks against the Lemma-2.2 structure on N⊗H
        let nh = Bimodule::from_left_module(&self.coinvariant_module(&coinv)?);
        for a in 0..dim {
            for v in 0..k * dim {
                let ev = unit_vec(spec, k * dim, v);
                if nu.mul_vec(&nh.act_left(&h.basis(a), &ev))
                    != self.act_left(&h.basis(a), &nu.mul_vec(&ev))
                {
                    return Err(Error::IdentityFailed {
                        identity: "Thm2.7".into(),
                        witness: format!("ν is not left H-linear at ({a},{v})"),
                    });
                }
                if nu.mul_vec(&nh.act_right(&ev, &h.basis(a)))
                    != self.act_right(&nu.mul_vec(&ev), &h.basis(a))
                {
                    return Err(Error::IdentityFailed {
                        identity: "Thm2.7".into(),
                        witness: format!("ν is not right H-linear at ({a},{v})"),
                    });
                }
            }
        }
        for v in 0..k * dim {
            let ev = unit_vec(spec, k * dim, v);
            let lhs = self.coaction(&nu.mul_vec(&ev));
            let rv = nh.coaction(&ev);
            let mut rhs = vec![spec.zero(); self.mdim * dim];
            for (wi, c) in rv.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (ni, hh) = (wi / dim, wi % dim);
                for (r, x) in nu.mul_vec(&unit_vec(spec, k * dim, ni)).iter().enumerate() {
                    if !x.is_zero() {
                        rhs[r * dim + hh] = &rhs[r * dim + hh] + &(c * x);
                    }
                }
            }
            if lhs != rhs {
                return Err(Error::IdentityFailed {
                    identity: "Thm2.7".into(),
                    witness: format!("ν is not an H-comodule map at {v}"),
                });
            }
        }

        Ok(NuMaps { nu, nu_inv })
    }
}

/// T_γ := γ(X̄)Ȳ⊗Z̄.
pub fn t_of_character(h: &Arc<QuasiHopf>, gamma: &DualElement) -> Element {
    let dim = h.dim();
    let mut t = h.algebra().zero_elem(2);
    for (pidx, c) in h.phi_inv().iter_nonzero() {
        let r = pidx % dim;
        let q = (pidx / dim) % dim;
        let p = pidx / (dim * dim);
        let g = &gamma.coeffs()[p];
        if g.is_zero() {
            continue;
        }
        t = t.add(&h.basis(q).tensor(&h.basis(r)).scale(&(c * g)));
    }
    t
}

/// A left quasi-Hopf H-bimodule (M, Λ) with Λ: M → H⊗M satisfying the
/// mirrored axioms (ε⊗id)∘Λ = id and (id⊗Λ)(Λ(m))·φ = φ·(Δ⊗id)(Λ(m)).
pub struct LeftBimodule {
    h: Arc<QuasiHopf>,
    mdim: usize,
    left: Matrix,
    right: Matrix,
    /// M → H⊗M, row index a·mdim + m
    lambda: Matrix,
}

impl LeftBimodule {
    pub fn new(h: Arc<QuasiHopf>, mdim: usize, left: Matrix, right: Matrix, lambda: Matrix) -> Self {
        let dim = h.dim();
        assert_eq!((left.rows(), left.cols()), (mdim, dim * mdim));
        assert_eq!((right.rows(), right.cols()), (mdim, mdim * dim));
        assert_eq!((lambda.rows(), lambda.cols()), (dim * mdim, mdim));
        LeftBimodule {
            h,
            mdim,
            left,
            right,
            lambda,
        }
    }

    /// (H, Δ) as a left quasi-Hopf bimodule.
    pub fn regular(h: &Arc<QuasiHopf>) -> Self {
        let dim = h.dim();
        let spec = h.spec();
        let mut left = Matrix::zero(spec, dim, dim * dim);
        let mut right = Matrix::zero(spec, dim, dim * dim);
        for a in 0..dim {
            for m in 0..dim {
                for (k, c) in h.algebra().basis_product(a, m) {
                    left.set(*k, a * dim + m, c.clone());
                }
                for (k, c) in h.algebra().basis_product(m, a) {
                    right.set(*k, m * dim + a, c.clone());
                }
            }
        }
        let lambda = h.delta_map().matrix().clone();
        LeftBimodule::new(Arc::clone(h), dim, left, right, lambda)
    }

    pub fn quasi_hopf(&self) -> &Arc<QuasiHopf> {
        &self.h
    }
    pub fn mdim(&self) -> usize {
        self.mdim
    }

    pub fn act_left(&self, a: &Element, m: &[Scalar]) -> Vec<Scalar> {
        let spec = self.h.spec();
        let mut out = vec![spec.zero(); self.mdim];
        for (hh, c) in a.iter_nonzero() {
            for (mi, x) in m.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let col = hh * self.mdim + mi;
                for r in 0..self.mdim {
                    let v = self.left.at(r, col);
                    if !v.is_zero() {
                        out[r] = &out[r] + &(&(c * x) * v);
                    }
                }
            }
        }
        out
    }

    pub fn act_right(&self, m: &[Scalar], a: &Element) -> Vec<Scalar> {
        let spec = self.h.spec();
        let dim = self.h.dim();
        let mut out = vec![spec.zero(); self.mdim];
        for (hh, c) in a.iter_nonzero() {
            for (mi, x) in m.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let col = mi * dim + hh;
                for r in 0..self.mdim {
                    let v = self.right.at(r, col);
                    if !v.is_zero() {
                        out[r] = &out[r] + &(&(c * x) * v);
                    }
                }
            }
        }
        out
    }

    /// Λ(m) in H⊗M (index a·mdim + m).
    pub fn coaction(&self, m: &[Scalar]) -> Vec<Scalar> {
        self.lambda.mul_vec(m)
    }

    // ---- helpers on H⊗M vectors ----

    fn hm_h_left(&self, v: &[Scalar], a: &Element) -> Vec<Scalar> {
        let dim = self.h.dim();
        let mut out = vec![self.h.spec().zero(); v.len()];
        for mi in 0..self.mdim {
            let slice: Vec<Scalar> = (0..dim).map(|x| v[x * self.mdim + mi].clone()).collect();
            let x = self.h.algebra().elem(1, slice);
            for (k, c) in a.mul(&x).iter_nonzero() {
                out[k * self.mdim + mi] = &out[k * self.mdim + mi] + c;
            }
        }
        out
    }

    fn hm_h_right(&self, v: &[Scalar], a: &Element) -> Vec<Scalar> {
        let dim = self.h.dim();
        let mut out = vec![self.h.spec().zero(); v.len()];
        for mi in 0..self.mdim {
            let slice: Vec<Scalar> = (0..dim).map(|x| v[x * self.mdim + mi].clone()).collect();
            let x = self.h.algebra().elem(1, slice);
            for (k, c) in x.mul(a).iter_nonzero() {
                out[k * self.mdim + mi] = &out[k * self.mdim + mi] + c;
            }
        }
        out
    }

    fn hm_m_left(&self, v: &[Scalar], a: &Element) -> Vec<Scalar> {
        let dim = self.h.dim();
        let mut out = vec![self.h.spec().zero(); v.len()];
        for x in 0..dim {
            let slice: Vec<Scalar> = (0..self.mdim)
                .map(|m| v[x * self.mdim + m].clone())
                .collect();
            for (m, c) in self.act_left(a, &slice).into_iter().enumerate() {
                out[x * self.mdim + m] = c;
            }
        }
        out
    }

    fn hm_m_right(&self, v: &[Scalar], a: &Element) -> Vec<Scalar> {
        let dim = self.h.dim();
        let mut out = vec![self.h.spec().zero(); v.len()];
        for x in 0..dim {
            let slice: Vec<Scalar> = (0..self.mdim)
                .map(|m| v[x * self.mdim + m].clone())
                .collect();
            for (m, c) in self.act_right(&slice, a).into_iter().enumerate() {
                out[x * self.mdim + m] = c;
            }
        }
        out
    }

    /// Λ̄(m) := V·Λ(m)·U with the H-slot multiplied, the M-slot acted.
    pub fn deformed_coaction_matrix(&self) -> Result<Matrix> {
        let h = &self.h;
        let d = h.derived()?;
        let dim = h.dim();
        let spec = h.spec();
        let mut out = Matrix::zero(spec, dim * self.mdim, self.mdim);
        for t in 0..self.mdim {
            let lam = self.coaction(&unit_vec(spec, self.mdim, t));
            let mut acc = vec![spec.zero(); dim * self.mdim];
            for (vidx, vc) in d.v.iter_nonzero() {
                let (v1, v2) = (vidx / dim, vidx % dim);
                for (uidx, uc) in d.u.iter_nonzero() {
                    let (u1, u2) = (uidx / dim, uidx % dim);
                    for (li, c) in lam.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let (hh, mi) = (li / self.mdim, li % self.mdim);
                        let hprod = h.basis(v1).mul(&h.basis(hh)).mul(&h.basis(u1));
                        let macted = self.act_right(
                            &self.act_left(&h.basis(v2), &unit_vec(spec, self.mdim, mi)),
                            &h.basis(u2),
                        );
                        for (hk, hc) in hprod.iter_nonzero() {
                            for (mr, mc) in macted.iter().enumerate() {
                                if mc.is_zero() {
                                    continue;
                                }
                                let row = hk * self.mdim + mr;
                                acc[row] = &acc[row] + &(&(&(&(vc * uc) * c) * hc) * mc);
                            }
                        }
                    }
                }
            }
            for (r, c) in acc.into_iter().enumerate() {
                out.set(r, t, c);
            }
        }
        Ok(out)
    }

    /// Mirrored Def-2.1 axioms for the left coaction.
    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::new();
        let h = &self.h;
        let dim = h.dim();
        let spec = h.spec();

        let mut w = None;
        for m in 0..self.mdim {
            let em = unit_vec(spec, self.mdim, m);
            if self.act_left(&h.unit(), &em) != em || self.act_right(&em, &h.unit()) != em {
                w = Some(format!("unit action fails on e{m}"));
                break;
            }
        }
        rep.record("Def2.1:unital", w);

        let mut w = None;
        'bimap: for a in 0..dim {
            for m in 0..self.mdim {
                let em = unit_vec(spec, self.mdim, m);
                let lam = self.coaction(&em);
                let lhs = self.coaction(&self.act_left(&h.basis(a), &em));
                let mut rhs = vec![spec.zero(); dim * self.mdim];
                for (j, k, c) in h.delta_rows(a) {
                    let t = self.hm_h_left(&self.hm_m_left(&lam, &h.basis(*k)), &h.basis(*j));
                    for (o, x) in rhs.iter_mut().zip(t) {
                        *o = &*o + &(&x * c);
                    }
                }
                if lhs != rhs {
                    w = Some(format!("Λ(a·m) ≠ Δ(a)Λ(m) at ({a},e{m})"));
                    break 'bimap;
                }
                let lhs = self.coaction(&self.act_right(&em, &h.basis(a)));
                let mut rhs = vec![spec.zero(); dim * self.mdim];
                for (j, k, c) in h.delta_rows(a) {
                    let t = self.hm_h_right(&self.hm_m_right(&lam, &h.basis(*k)), &h.basis(*j));
                    for (o, x) in rhs.iter_mut().zip(t) {
                        *o = &*o + &(&x * c);
                    }
                }
                if lhs != rhs {
                    w = Some(format!("Λ(m·a) ≠ Λ(m)Δ(a) at ({a},e{m})"));
                    break 'bimap;
                }
            }
        }
        rep.record("Def2.1:bimodule-map", w);

        let mut w = None;
        for m in 0..self.mdim {
            let em = unit_vec(spec, self.mdim, m);
            let lam = self.coaction(&em);
            let mut back = vec![spec.zero(); self.mdim];
            for (li, c) in lam.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (hh, mi) = (li / self.mdim, li % self.mdim);
                back[mi] = &back[mi] + &(c * &h.eps(&h.basis(hh)));
            }
            if back != em {
                w = Some(format!("(ε⊗id)Λ(e{m}) ≠ e{m}"));
                break;
            }
        }
        rep.record("(2.1)", w);

        let mut w = None;
        for m in 0..self.mdim {
            let em = unit_vec(spec, self.mdim, m);
            let lam = self.coaction(&em);
            // (id⊗Λ)(Λ(m)) in H⊗H⊗M
            let mut a1 = vec![spec.zero(); dim * dim * self.mdim];
            for (li, c) in lam.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (hh, mi) = (li / self.mdim, li % self.mdim);
                for (wi, cc) in self
                    .coaction(&unit_vec(spec, self.mdim, mi))
                    .iter()
                    .enumerate()
                {
                    if cc.is_zero() {
                        continue;
                    }
                    let (hk, mj) = (wi / self.mdim, wi % self.mdim);
                    let row = (hh * dim + hk) * self.mdim + mj;
                    a1[row] = &a1[row] + &(c * cc);
                }
            }
            // (Δ⊗id)(Λ(m))
            let mut a2 = vec![spec.zero(); dim * dim * self.mdim];
            for (li, c) in lam.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (hh, mi) = (li / self.mdim, li % self.mdim);
                for (j, k, cc) in h.delta_rows(hh) {
                    let row = (j * dim + k) * self.mdim + mi;
                    a2[row] = &a2[row] + &(c * cc);
                }
            }
            if self.hhm_elem3_right(&a1, h.phi()) != self.hhm_elem3_left(&a2, h.phi()) {
                w = Some(format!("left quasi-coassociativity fails at e{m}"));
                break;
            }
        }
        rep.record("(2.2)", w);

        rep
    }

    // ---- helpers on H⊗H⊗M vectors (index (x·dim + y)·mdim + m) ----

    fn hhm_elem3_left(&self, v: &[Scalar], e3: &Element) -> Vec<Scalar> {
        let dim = self.h.dim();
        let spec = self.h.spec();
        let mut out = vec![spec.zero(); v.len()];
        for (pidx, c) in e3.iter_nonzero() {
            let z = pidx % dim;
            let y = (pidx / dim) % dim;
            let x = pidx / (dim * dim);
            for (vi, coef) in v.iter().enumerate() {
                if coef.is_zero() {
                    continue;
                }
                let mi = vi % self.mdim;
                let hy = (vi / self.mdim) % dim;
                let hx = vi / (self.mdim * dim);
                let px = self.h.basis(x).mul(&self.h.basis(hx));
                let py = self.h.basis(y).mul(&self.h.basis(hy));
                let am = self.act_left(&self.h.basis(z), &unit_vec(spec, self.mdim, mi));
                for (xi, xc) in px.iter_nonzero() {
                    for (yi, yc) in py.iter_nonzero() {
                        for (mr, mc) in am.iter().enumerate() {
                            if mc.is_zero() {
                                continue;
                            }
                            let row = (xi * dim + yi) * self.mdim + mr;
                            out[row] = &out[row] + &(&(&(&(c * coef) * xc) * yc) * mc);
                        }
                    }
                }
            }
        }
        out
    }

    fn hhm_elem3_right(&self, v: &[Scalar], e3: &Element) -> Vec<Scalar> {
        let dim = self.h.dim();
        let spec = self.h.spec();
        let mut out = vec![spec.zero(); v.len()];
        for (pidx, c) in e3.iter_nonzero() {
            let z = pidx % dim;
            let y = (pidx / dim) % dim;
            let x = pidx / (dim * dim);
            for (vi, coef) in v.iter().enumerate() {
                if coef.is_zero() {
                    continue;
                }
                let mi = vi % self.mdim;
                let hy = (vi / self.mdim) % dim;
                let hx = vi / (self.mdim * dim);
                let px = self.h.basis(hx).mul(&self.h.basis(x));
                let py = self.h.basis(hy).mul(&self.h.basis(y));
                let am = self.act_right(&unit_vec(spec, self.mdim, mi), &self.h.basis(z));
                for (xi, xc) in px.iter_nonzero() {
                    for (yi, yc) in py.iter_nonzero() {
                        for (mr, mc) in am.iter().enumerate() {
                            if mc.is_zero() {
                                continue;
                            }
                            let row = (xi * dim + yi) * self.mdim + mr;
                            out[row] = &out[row] + &(&(&(&(c * coef) * xc) * yc) * mc);
                        }
                    }
                }
            }
        }
        out
    }

    /// Checks the deformed-coaction identities (2.19) and (2.20).
    pub fn deformed_coaction_report(&self) -> Result<ValidationReport> {
        let mut rep = ValidationReport::new();
        let h = &self.h;
        let dim = h.dim();
        let spec = h.spec();
        let lam_bar = self.deformed_coaction_matrix()?;
        let lam_bar_vec =
            |m: &[Scalar]| -> Vec<Scalar> { lam_bar.mul_vec(m) };

        // (2.19): [1⊗S⁻¹(a)]·Λ̄(m)·[1⊗S(b)]
        //         = [a₍₂₎⊗1]·Λ̄(S⁻¹(a₍₁₎)·m·S(b₍₁₎))·[b₍₂₎⊗1]
        let mut w = None;
        '_219: for a in 0..dim {
            for b in 0..dim {
                for m in 0..self.mdim {
                    let em = unit_vec(spec, self.mdim, m);
                    let lhs = self.hm_m_right(
                        &self.hm_m_left(&lam_bar_vec(&em), &h.sa_inv(&h.basis(a))),
                        &h.sa(&h.basis(b)),
                    );
                    let mut rhs = vec![spec.zero(); dim * self.mdim];
                    for (a1, a2, ca) in h.delta_rows(a) {
                        for (b1, b2, cb) in h.delta_rows(b) {
                            let inner = self.act_right(
                                &self.act_left(&h.sa_inv(&h.basis(*a1)), &em),
                                &h.sa(&h.basis(*b1)),
                            );
                            let t = self.hm_h_right(
                                &self.hm_h_left(&lam_bar_vec(&inner), &h.basis(*a2)),
                                &h.basis(*b2),
                            );
                            for (o, x) in rhs.iter_mut().zip(t) {
                                *o = &*o + &(&x * &(ca * cb));
                            }
                        }
                    }
                    if lhs != rhs {
                        w = Some(format!("fails at (a={a}, b={b}, e{m})"));
                        break '_219;
                    }
                }
            }
        }
        rep.record("(2.19)", w);

        // (2.20): [Y⊗Z⊗1]·(id⊗Λ̄)Λ̄(S⁻¹(X)·m) = (Δ⊗id)Λ̄(m·S(X))·[Y⊗Z⊗1]
        let mut w = None;
        for m in 0..self.mdim {
            let em = unit_vec(spec, self.mdim, m);
            let mut lhs = vec![spec.zero(); dim * dim * self.mdim];
            let mut rhs = vec![spec.zero(); dim * dim * self.mdim];
            for (pidx, c) in h.phi().iter_nonzero() {
                let z = pidx % dim;
                let y = (pidx / dim) % dim;
                let x = pidx / (dim * dim);
                let yz1 = h.basis(y).tensor(&h.basis(z)).tensor(&h.unit());

                let w1 = self.act_left(&h.sa_inv(&h.basis(x)), &em);
                let lam1 = lam_bar_vec(&w1);
                let mut t1 = vec![spec.zero(); dim * dim * self.mdim];
                for (li, cc) in lam1.iter().enumerate() {
                    if cc.is_zero() {
                        continue;
                    }
                    let (hh, mi) = (li / self.mdim, li % self.mdim);
                    for (wi, c2) in lam_bar_vec(&unit_vec(spec, self.mdim, mi))
                        .iter()
                        .enumerate()
                    {
                        if c2.is_zero() {
                            continue;
                        }
                        let (hk, mj) = (wi / self.mdim, wi % self.mdim);
                        let row = (hh * dim + hk) * self.mdim + mj;
                        t1[row] = &t1[row] + &(cc * c2);
                    }
                }
                let t1 = self.hhm_elem3_left(&t1, &yz1);
                for (o, v) in lhs.iter_mut().zip(t1) {
                    *o = &*o + &(&v * c);
                }

                let w2 = self.act_right(&em, &h.sa(&h.basis(x)));
                let lam2 = lam_bar_vec(&w2);
                let mut t2 = vec![spec.zero(); dim * dim * self.mdim];
                for (li, cc) in lam2.iter().enumerate() {
                    if cc.is_zero() {
                        continue;
                    }
                    let (hh, mi) = (li / self.mdim, li % self.mdim);
                    for (j, k, c2) in h.delta_rows(hh) {
                        let row = (j * dim + k) * self.mdim + mi;
                        t2[row] = &t2[row] + &(cc * c2);
                    }
                }
                let t2 = self.hhm_elem3_right(&t2, &yz1);
                for (o, v) in rhs.iter_mut().zip(t2) {
                    *o = &*o + &(&v * c);
                }
            }
            if lhs != rhs {
                w = Some(format!("fails at e{m}"));
                break;
            }
        }
        rep.record("(2.20)", w);

        Ok(rep)
    }

    /// The dual right quasi-Hopf bimodule (M*, ρ) of Prop 2.12:
    /// ⟨a·ψ·b | m⟩ = ⟨ψ | S⁻¹(a)·m·S(b)⟩ and [ρ(ψ)](m) = (id⊗ψ)(Λ̄(m)).
    pub fn dual_bimodule(&self) -> Result<Bimodule> {
        let h = &self.h;
        let dim = h.dim();
        let spec = h.spec();

        let mut left = Matrix::zero(spec, self.mdim, dim * self.mdim);
        let mut right = Matrix::zero(spec, self.mdim, self.mdim * dim);
        for a in 0..dim {
            let sa_inv = h.sa_inv(&h.basis(a));
            let sa = h.sa(&h.basis(a));
            for t in 0..self.mdim {
                let cl = self.act_left(&sa_inv, &unit_vec(spec, self.mdim, t));
                let cr = self.act_right(&unit_vec(spec, self.mdim, t), &sa);
                for u in 0..self.mdim {
                    if !cl[u].is_zero() {
                        left.set(t, a * self.mdim + u, cl[u].clone());
                    }
                    if !cr[u].is_zero() {
                        right.set(t, u * dim + a, cr[u].clone());
                    }
                }
            }
        }

        let lam_bar = self.deformed_coaction_matrix()?;
        let mut rho = Matrix::zero(spec, self.mdim * dim, self.mdim);
        for t in 0..self.mdim {
            for x in 0..dim {
                for u in 0..self.mdim {
                    let c = lam_bar.at(x * self.mdim + u, t);
                    if !c.is_zero() {
                        rho.set(t * dim + x, u, c.clone());
                    }
                }
            }
        }
        Ok(Bimodule::new(Arc::clone(h), self.mdim, left, right, rho))
    }

    /// Lemma 4.5: (id⊗ψ)(q_R·Λ(k)·p_R) = (k⊗id)(q_L·ρ(ψ)·p_L) for all
    /// basis k and ψ, where ρ is the dual coaction.
    pub fn pairing_exchange_report(&self, dual: &Bimodule) -> Result<ValidationReport> {
        let mut rep = ValidationReport::new();
        let h = &self.h;
        let d = h.derived()?;
        let dim = h.dim();
        let spec = h.spec();

        let mut w = None;
        'outer: for k in 0..self.mdim {
            let ek = unit_vec(spec, self.mdim, k);
            for u in 0..self.mdim {
                // LHS: q_R·Λ(k)·p_R ∈ H⊗K, then pair the K slot with e^u
                let lam = self.coaction(&ek);
                let mut lhs = h.algebra().zero_elem(1);
                for (qidx, qc) in d.q_r.iter_nonzero() {
                    let (q1, q2) = (qidx / dim, qidx % dim);
                    for (pidx, pc) in d.p_r.iter_nonzero() {
                        let (p1, p2) = (pidx / dim, pidx % dim);
                        for (li, c) in lam.iter().enumerate() {
                            if c.is_zero() {
                                continue;
                            }
                            let (hh, mi) = (li / self.mdim, li % self.mdim);
                            let hprod = h.basis(q1).mul(&h.basis(hh)).mul(&h.basis(p1));
                            let macted = self.act_right(
                                &self.act_left(&h.basis(q2), &unit_vec(spec, self.mdim, mi)),
                                &h.basis(p2),
                            );
                            let pair = &macted[u];
                            if pair.is_zero() {
                                continue;
                            }
                            lhs = lhs.add(&hprod.scale(&(&(&(qc * pc) * c) * pair)));
                        }
                    }
                }
                // RHS: q_L·ρ(e^u)·p_L ∈ K̂⊗H, then evaluate the K̂ slot at e_k
                let rv = dual.coaction(&unit_vec(spec, self.mdim, u));
                let mut rhs = h.algebra().zero_elem(1);
                for (qidx, qc) in d.q_l.iter_nonzero() {
                    let (q1, q2) = (qidx / dim, qidx % dim);
                    for (pidx, pc) in d.p_l.iter_nonzero() {
                        let (p1, p2) = (pidx / dim, pidx % dim);
                        for (vi, c) in rv.iter().enumerate() {
                            if c.is_zero() {
                                continue;
                            }
                            let (ti, x) = (vi / dim, vi % dim);
                            // (q_L¹·e^t·p_L¹) evaluated at e_k
                            // = ⟨e^t | S⁻¹(q_L¹)·e_k·S(p_L¹)⟩
                            let inner = self.act_right(
                                &self.act_left(&h.sa_inv(&h.basis(q1)), &ek),
                                &h.sa(&h.basis(p1)),
                            );
                            let pair = &inner[ti];
                            if pair.is_zero() {
                                continue;
                            }
                            let hprod = h.basis(q2).mul(&h.basis(x)).mul(&h.basis(p2));
                            rhs = rhs.add(&hprod.scale(&(&(&(qc * pc) * c) * pair)));
                        }
                    }
                }
                if lhs != rhs {
                    w = Some(format!("fails at (e{k}, e^{u})"));
                    break 'outer;
                }
            }
        }
        rep.record("Lem4.5", w);
        Ok(rep)
    }
}
