//! Quasi-Hopf algebra structures: axiom validation, derived structure
//! elements with their identity suite, twisting, the opposite algebra, the
//! deformed coproduct with its star product on the dual, and the linear
//! solver for antipode data (α, β).

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::algebra::{Algebra, DualElement, Element, LinMap};
use crate::error::{Error, Result};
use crate::report::ValidationReport;
use crate::scalar::Scalar;

/// The derived-element identity suite in check order.
pub const DERIVED_SUITE_IDS: &[&str] = &[
    "(1.12)", "(1.13)γ", "(1.13)δ", "(1.17)", "(1.15)", "(1.18)", "(1.22)", "(1.22')",
    "(1.23)", "(1.23')", "(1.24)L", "(1.24)R", "(1.25)L", "(1.25)R", "(1.26)", "(2.22)",
    "(2.23)", "(2.24)", "(2.25)", "(h1)", "(h2)",
];

/// A finite-dimensional quasi-Hopf algebra
/// (H, Δ, ε, φ, S, α, β) with S invertible.
pub struct QuasiHopf {
    alg: Arc<Algebra>,
    delta: LinMap,
    counit: LinMap,
    phi: Element,
    phi_inv: Element,
    s: LinMap,
    s_inv: LinMap,
    alpha: Element,
    beta: Element,
    /// Sparse rows of Δ: delta_rows[i] = [(j, k, c)] with Δ(b_i) = Σ c b_j⊗b_k.
    delta_rows: Vec<Vec<(usize, usize, Scalar)>>,
    /// The ε(α) factor divided out of α at assembly, if any.
    rescale_factor: Option<Scalar>,
    /// Set when ε(α) = 0 so no normalization was possible.
    eps_alpha_zero: bool,
    derived: OnceLock<std::result::Result<Derived, (String, String)>>,
}

/// Derived structure elements, each validated by its defining identity
/// suite before use.
#[derive(Clone)]
pub struct Derived {
    pub gamma: Element,
    pub delta_el: Element,
    pub f: Element,
    pub f_inv: Element,
    pub h: Element,
    pub h_inv: Element,
    pub q_r: Element,
    pub p_r: Element,
    pub q_l: Element,
    pub p_l: Element,
    pub u: Element,
    pub v: Element,
}

impl QuasiHopf {
    /// Builds the structure from raw parts. Shape checks run here; φ⁻¹ and
    /// S⁻¹ are recomputed and cross-checked against supplied values, and
    /// (α, β) are rescaled to ε(α) = 1 when ε(α) ≠ 0. Axioms are checked
    /// separately by [`QuasiHopf::validate`].
    #[allow(clippy::too_many_arguments)]
    pub fn assemble(
        alg: Arc<Algebra>,
        delta: LinMap,
        counit: LinMap,
        phi: Element,
        phi_inv: Option<Element>,
        s: LinMap,
        s_inv: Option<LinMap>,
        alpha: Element,
        beta: Element,
    ) -> Result<Self> {
        assert_eq!((delta.src_degree(), delta.dst_degree()), (1, 2));
        assert_eq!((counit.src_degree(), counit.dst_degree()), (1, 0));
        assert_eq!((s.src_degree(), s.dst_degree()), (1, 1));
        assert_eq!(phi.degree(), 3);
        assert_eq!(alpha.degree(), 1);
        assert_eq!(beta.degree(), 1);

        let computed_phi_inv = phi
            .invert()
            .ok_or_else(|| Error::NonInvertible("reassociator is not invertible".into()))?;
        if let Some(given) = phi_inv {
            if given != computed_phi_inv {
                return Err(Error::Validation(
                    "supplied phi_inv disagrees with the computed inverse".into(),
                ));
            }
        }
        let computed_s_inv = s
            .inverse()
            .ok_or_else(|| Error::NonInvertible("antipode is not invertible".into()))?;
        if let Some(given) = s_inv {
            if given != computed_s_inv {
                return Err(Error::Validation(
                    "supplied S_inv disagrees with the computed inverse".into(),
                ));
            }
        }

        let mut delta_rows = Vec::with_capacity(alg.dim());
        for i in 0..alg.dim() {
            let img = delta.apply(&alg.basis_elem(i));
            let mut row = Vec::new();
            for (idx, c) in img.iter_nonzero() {
                row.push((idx / alg.dim(), idx % alg.dim(), c.clone()));
            }
            delta_rows.push(row);
        }

        let eps_alpha = counit.apply(&alpha).as_scalar().clone();
        let (alpha, beta, rescale_factor, eps_alpha_zero) = if eps_alpha.is_zero() {
            (alpha, beta, None, true)
        } else if eps_alpha.is_one() {
            (alpha, beta, None, false)
        } else {
            let inv = eps_alpha.inv().unwrap();
            (
                alpha.scale(&inv),
                beta.scale(&eps_alpha),
                Some(eps_alpha),
                false,
            )
        };

        Ok(QuasiHopf {
            alg,
            delta,
            counit,
            phi,
            phi_inv: computed_phi_inv,
            s,
            s_inv: computed_s_inv,
            alpha,
            beta,
            delta_rows,
            rescale_factor,
            eps_alpha_zero,
            derived: OnceLock::new(),
        })
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }
    pub fn dim(&self) -> usize {
        self.alg.dim()
    }
    pub fn spec(&self) -> crate::scalar::FieldSpec {
        self.alg.spec()
    }
    pub fn delta_map(&self) -> &LinMap {
        &self.delta
    }
    pub fn counit_map(&self) -> &LinMap {
        &self.counit
    }
    pub fn antipode(&self) -> &LinMap {
        &self.s
    }
    pub fn antipode_inv(&self) -> &LinMap {
        &self.s_inv
    }
    pub fn phi(&self) -> &Element {
        &self.phi
    }
    pub fn phi_inv(&self) -> &Element {
        &self.phi_inv
    }
    pub fn alpha(&self) -> &Element {
        &self.alpha
    }
    pub fn beta(&self) -> &Element {
        &self.beta
    }
    pub fn rescale_factor(&self) -> Option<&Scalar> {
        self.rescale_factor.as_ref()
    }
    pub fn eps_alpha_zero(&self) -> bool {
        self.eps_alpha_zero
    }
    pub fn unit(&self) -> Element {
        self.alg.unit_elem(1)
    }
    pub fn basis(&self, i: usize) -> Element {
        self.alg.basis_elem(i)
    }
    pub fn delta_rows(&self, i: usize) -> &[(usize, usize, Scalar)] {
        &self.delta_rows[i]
    }

    pub fn dl(&self, x: &Element) -> Element {
        self.delta.apply(x)
    }
    pub fn dl_op(&self, x: &Element) -> Element {
        self.delta.apply(x).embed(&[1, 0], 2)
    }
    pub fn eps(&self, x: &Element) -> Scalar {
        self.counit.apply(x).as_scalar().clone()
    }
    pub fn sa(&self, x: &Element) -> Element {
        self.s.apply(x)
    }
    pub fn sa_inv(&self, x: &Element) -> Element {
        self.s_inv.apply(x)
    }

    /// Convolution product on the dual: ⟨φψ | a⟩ = ⟨φ⊗ψ | Δ(a)⟩.
    pub fn dual_mul(&self, f: &DualElement, g: &DualElement) -> DualElement {
        let spec = self.alg.spec();
        let mut out = vec![spec.zero(); self.dim()];
        for (i, coeff) in out.iter_mut().enumerate() {
            let mut acc = spec.zero();
            for (j, k, c) in &self.delta_rows[i] {
                let fj = &f.coeffs()[*j];
                let gk = &g.coeffs()[*k];
                if !fj.is_zero() && !gk.is_zero() {
                    acc = &acc + &(&(fj * gk) * c);
                }
            }
            *coeff = acc;
        }
        self.alg.dual_elem(out)
    }

    /// φ ⇀ a := a₍₁₎ ⟨φ | a₍₂₎⟩.
    pub fn hit_elem_left(&self, f: &DualElement, a: &Element) -> Element {
        self.dl(a).contract(f, 1)
    }

    /// a ↼ φ := ⟨φ | a₍₁₎⟩ a₍₂₎.
    pub fn hit_elem_right(&self, a: &Element, f: &DualElement) -> Element {
        self.dl(a).contract(f, 0)
    }

    /// Checks that a functional is a character (unital algebra map);
    /// returns the first failing witness.
    pub fn character_witness(&self, gamma: &DualElement) -> Option<String> {
        let dim = self.dim();
        for a in 0..dim {
            for b in 0..dim {
                let prod = self.basis(a).mul(&self.basis(b));
                let lhs = gamma.pair(&prod);
                let rhs = &gamma.pair(&self.basis(a)) * &gamma.pair(&self.basis(b));
                if lhs != rhs {
                    return Some(format!(
                        "multiplicativity fails at ({}, {})",
                        self.alg.label(a),
                        self.alg.label(b)
                    ));
                }
            }
        }
        if !gamma.pair(&self.unit()).is_one() {
            return Some("γ(1) ≠ 1".into());
        }
        None
    }

    /// ε as a dual element.
    pub fn counit_dual(&self) -> DualElement {
        let coeffs = (0..self.dim())
            .map(|i| self.eps(&self.basis(i)))
            .collect();
        self.alg.dual_elem(coeffs)
    }

    /// Full axiom report: coproduct/counit homomorphism laws, the
    /// quasi-coassociativity and pentagon identities, counit laws,
    /// reassociator normalizations and invertibility, antipode laws.
    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::new();
        let dim = self.dim();
        let one1 = self.alg.unit_elem(1);
        let one2 = self.alg.unit_elem(2);
        let one3 = self.alg.unit_elem(3);

        let pair_check = |f: &dyn Fn(usize, usize) -> (Element, Element)| -> Option<String> {
            for i in 0..dim {
                for j in 0..dim {
                    let (l, r) = f(i, j);
                    if l != r {
                        return Some(format!(
                            "at ({}, {}): {} vs {}",
                            self.alg.label(i),
                            self.alg.label(j),
                            l,
                            r
                        ));
                    }
                }
            }
            None
        };
        let basis_check = |f: &dyn Fn(usize) -> (Element, Element)| -> Option<String> {
            for i in 0..dim {
                let (l, r) = f(i);
                if l != r {
                    return Some(format!("at {}: {} vs {}", self.alg.label(i), l, r));
                }
            }
            None
        };

        rep.record(
            "Δ:alg-map",
            pair_check(&|i, j| {
                let prod = self.basis(i).mul(&self.basis(j));
                (self.dl(&prod), self.dl(&self.basis(i)).mul(&self.dl(&self.basis(j))))
            })
            .or_else(|| {
                (self.dl(&one1) != one2).then(|| format!("Δ(1) = {} ≠ 1⊗1", self.dl(&one1)))
            }),
        );

        rep.record(
            "ε:alg-map",
            pair_check(&|i, j| {
                let prod = self.basis(i).mul(&self.basis(j));
                let l = self.alg.scalar_elem(self.eps(&prod));
                let r = self
                    .alg
                    .scalar_elem(&self.eps(&self.basis(i)) * &self.eps(&self.basis(j)));
                (l, r)
            })
            .or_else(|| {
                (!self.eps(&one1).is_one()).then(|| format!("ε(1) = {}", self.eps(&one1)))
            }),
        );

        // (1.1) quasi-coassociativity
        rep.record(
            "(1.1)",
            basis_check(&|i| {
                let d = self.dl(&self.basis(i));
                let lhs = d.map_slot(&self.delta, 1).mul(&self.phi);
                let rhs = self.phi.mul(&d.map_slot(&self.delta, 0));
                (lhs, rhs)
            }),
        );

        // (1.2) pentagon
        {
            let lhs = self
                .phi
                .map_slot(&self.delta, 2)
                .mul(&self.phi.map_slot(&self.delta, 0));
            let rhs = self
                .phi
                .embed(&[1, 2, 3], 4)
                .mul(&self.phi.map_slot(&self.delta, 1))
                .mul(&self.phi.embed(&[0, 1, 2], 4));
            rep.record(
                "(1.2)",
                (lhs != rhs).then(|| format!("{} vs {}", lhs, rhs)),
            );
        }

        // (1.3) counit laws
        rep.record(
            "(1.3)",
            basis_check(&|i| {
                let d = self.dl(&self.basis(i));
                (d.map_slot(&self.counit, 0), self.basis(i))
            })
            .or_else(|| {
                basis_check(&|i| {
                    let d = self.dl(&self.basis(i));
                    (d.map_slot(&self.counit, 1), self.basis(i))
                })
            }),
        );

        // (1.4) and its implied normalizations
        for (id, slot) in [("(1.4)", 1usize), ("(1.4)'", 0), ("(1.4)''", 2)] {
            let e = self.phi.map_slot(&self.counit, slot);
            rep.record(id, (e != one2).then(|| format!("got {}", e)));
        }

        // reassociator invertibility (φ⁻¹ is recomputed at assembly, so
        // this can only fail on a hand-mutated structure)
        {
            let l = self.phi.mul(&self.phi_inv);
            let r = self.phi_inv.mul(&self.phi);
            rep.record(
                "φφ⁻¹",
                (l != one3 || r != one3).then(|| format!("φφ⁻¹ = {}, φ⁻¹φ = {}", l, r)),
            );
        }

        rep.record(
            "S:anti-hom",
            pair_check(&|i, j| {
                let prod = self.basis(i).mul(&self.basis(j));
                (
                    self.sa(&prod),
                    self.sa(&self.basis(j)).mul(&self.sa(&self.basis(i))),
                )
            })
            .or_else(|| (self.sa(&one1) != one1).then(|| format!("S(1) = {}", self.sa(&one1)))),
        );

        rep.record(
            "S∘S⁻¹",
            basis_check(&|i| {
                (
                    self.sa(&self.sa_inv(&self.basis(i))),
                    self.basis(i),
                )
            })
            .or_else(|| basis_check(&|i| (self.sa_inv(&self.sa(&self.basis(i))), self.basis(i)))),
        );

        // (1.7) antipode equations
        rep.record(
            "(1.7)L",
            basis_check(&|i| {
                let mut acc = self.alg.zero_elem(1);
                for (j, k, c) in &self.delta_rows[i] {
                    let t = self.sa(&self.basis(*j)).mul(&self.alpha).mul(&self.basis(*k));
                    acc = acc.add(&t.scale(c));
                }
                (acc, self.alpha.scale(&self.eps(&self.basis(i))))
            }),
        );
        rep.record(
            "(1.7)R",
            basis_check(&|i| {
                let mut acc = self.alg.zero_elem(1);
                for (j, k, c) in &self.delta_rows[i] {
                    let t = self.basis(*j).mul(&self.beta).mul(&self.sa(&self.basis(*k)));
                    acc = acc.add(&t.scale(c));
                }
                (acc, self.beta.scale(&self.eps(&self.basis(i))))
            }),
        );

        // (1.8) normalizations
        {
            let lhs = self.sum_over_three(&self.phi, |x, y, z| {
                x.mul(&self.beta).mul(&self.sa(y)).mul(&self.alpha).mul(z)
            });
            rep.record("(1.8)L", (lhs != one1).then(|| format!("got {}", lhs)));
            let rhs = self.sum_over_three(&self.phi_inv, |x, y, z| {
                self.sa(x).mul(&self.alpha).mul(y).mul(&self.beta).mul(&self.sa(z))
            });
            rep.record("(1.8)R", (rhs != one1).then(|| format!("got {}", rhs)));
        }

        rep.record(
            "ε∘S",
            basis_check(&|i| {
                (
                    self.alg.scalar_elem(self.eps(&self.sa(&self.basis(i)))),
                    self.alg.scalar_elem(self.eps(&self.basis(i))),
                )
            }),
        );

        {
            let v = self.eps(&self.alpha.mul(&self.beta));
            rep.record("ε(αβ)", (!v.is_one()).then(|| format!("got {}", v)));
        }

        rep
    }

    /// Σ over the terms of a degree-3 element, mapping each basis triple.
    fn sum_over_three(
        &self,
        el: &Element,
        f: impl Fn(&Element, &Element, &Element) -> Element,
    ) -> Element {
        let dim = self.dim();
        let mut acc = self.alg.zero_elem(1);
        for (idx, c) in el.iter_nonzero() {
            let z = idx % dim;
            let y = (idx / dim) % dim;
            let x = idx / (dim * dim);
            acc = acc.add(&f(&self.basis(x), &self.basis(y), &self.basis(z)).scale(c));
        }
        acc
    }

    /// Derived elements with their full identity suite; computed once and
    /// cached. A suite failure is fatal for every downstream computation.
    pub fn derived(&self) -> Result<&Derived> {
        let r = self
            .derived
            .get_or_init(|| match self.compute_derived() {
                Ok(d) => match self.run_derived_suite(&d) {
                    Ok(()) => Ok(d),
                    Err(e) => Err(e),
                },
                Err(e) => Err(e),
            });
        match r {
            Ok(d) => Ok(d),
            Err((identity, witness)) => Err(Error::IdentityFailed {
                identity: identity.clone(),
                witness: witness.clone(),
            }),
        }
    }

    fn compute_derived(&self) -> std::result::Result<Derived, (String, String)> {
        let alg = &self.alg;
        let dim = alg.dim();

        // four-tensor (1⊗φ⁻¹)·(id⊗id⊗Δ)(φ), components T⊗U⊗V⊗W
        let theta = self
            .phi_inv
            .embed(&[1, 2, 3], 4)
            .mul(&self.phi.map_slot(&self.delta, 2));
        let mut gamma = alg.zero_elem(2);
        for (idx, c) in theta.iter_nonzero() {
            let w = idx % dim;
            let v = (idx / dim) % dim;
            let u = (idx / (dim * dim)) % dim;
            let t = idx / (dim * dim * dim);
            let left = self.sa(&self.basis(u)).mul(&self.alpha).mul(&self.basis(v));
            let right = self.sa(&self.basis(t)).mul(&self.alpha).mul(&self.basis(w));
            gamma = gamma.add(&left.tensor(&right).scale(c));
        }

        // four-tensor (Δ⊗id⊗id)(φ)·(φ⁻¹⊗1), components K⊗L⊗M⊗N
        let xi = self
            .phi
            .map_slot(&self.delta, 0)
            .mul(&self.phi_inv.embed(&[0, 1, 2], 4));
        let mut delta_el = alg.zero_elem(2);
        for (idx, c) in xi.iter_nonzero() {
            let n = idx % dim;
            let m = (idx / dim) % dim;
            let l = (idx / (dim * dim)) % dim;
            let k = idx / (dim * dim * dim);
            let left = self.basis(k).mul(&self.beta).mul(&self.sa(&self.basis(n)));
            let right = self.basis(l).mul(&self.beta).mul(&self.sa(&self.basis(m)));
            delta_el = delta_el.add(&left.tensor(&right).scale(c));
        }

        let mut f = alg.zero_elem(2);
        for (idx, c) in self.phi_inv.iter_nonzero() {
            let z = idx % dim;
            let y = (idx / dim) % dim;
            let x = idx / (dim * dim);
            let pre = self
                .dl_op(&self.basis(x))
                .map_slot(&self.s, 0)
                .map_slot(&self.s, 1);
            let post = self.dl(&self.basis(y).mul(&self.beta).mul(&self.sa(&self.basis(z))));
            f = f.add(&pre.mul(&gamma).mul(&post).scale(c));
        }
        let f_inv = f
            .invert()
            .ok_or_else(|| ("(1.11)".to_string(), "f is not invertible".to_string()))?;

        let h = f
            .embed(&[1, 0], 2)
            .map_slot(&self.s_inv, 0)
            .map_slot(&self.s_inv, 1);
        let h_inv = f_inv
            .embed(&[1, 0], 2)
            .map_slot(&self.s_inv, 0)
            .map_slot(&self.s_inv, 1);
        if h.mul(&h_inv) != self.alg.unit_elem(2) {
            return Err((
                "(1.14)".to_string(),
                "h·h⁻¹ ≠ 1⊗1 for the transported inverse".to_string(),
            ));
        }

        let mut q_r = alg.zero_elem(2);
        let mut p_l = alg.zero_elem(2);
        for (idx, c) in self.phi.iter_nonzero() {
            let z = idx % dim;
            let y = (idx / dim) % dim;
            let x = idx / (dim * dim);
            let qr_term = self
                .basis(x)
                .tensor(&self.sa_inv(&self.alpha.mul(&self.basis(z))).mul(&self.basis(y)));
            q_r = q_r.add(&qr_term.scale(c));
            let pl_term = self
                .basis(y)
                .mul(&self.sa_inv(&self.basis(x).mul(&self.beta)))
                .tensor(&self.basis(z));
            p_l = p_l.add(&pl_term.scale(c));
        }
        let mut p_r = alg.zero_elem(2);
        let mut q_l = alg.zero_elem(2);
        for (idx, c) in self.phi_inv.iter_nonzero() {
            let z = idx % dim;
            let y = (idx / dim) % dim;
            let x = idx / (dim * dim);
            let pr_term = self
                .basis(x)
                .tensor(&self.basis(y).mul(&self.beta).mul(&self.sa(&self.basis(z))));
            p_r = p_r.add(&pr_term.scale(c));
            let ql_term = self
                .sa(&self.basis(x))
                .mul(&self.alpha)
                .mul(&self.basis(y))
                .tensor(&self.basis(z));
            q_l = q_l.add(&ql_term.scale(c));
        }

        let u = f_inv.mul(
            &q_r.embed(&[1, 0], 2)
                .map_slot(&self.s, 0)
                .map_slot(&self.s, 1),
        );
        let v = p_r
            .embed(&[1, 0], 2)
            .map_slot(&self.s_inv, 0)
            .map_slot(&self.s_inv, 1)
            .mul(&h);

        Ok(Derived {
            gamma,
            delta_el,
            f,
            f_inv,
            h,
            h_inv,
            q_r,
            p_r,
            q_l,
            p_l,
            u,
            v,
        })
    }

    /// Runs every identity the derived elements must satisfy, quantified
    /// over all basis elements; reports the first violation.
    fn run_derived_suite(&self, d: &Derived) -> std::result::Result<(), (String, String)> {
        let dim = self.dim();
        let one2 = self.alg.unit_elem(2);

        let fail = |id: &str, w: String| Err((id.to_string(), w));

        // (1.12) f Δ(a) f⁻¹ = (S⊗S)(Δᵒᵖ(S⁻¹(a)))
        for i in 0..dim {
            let a = self.basis(i);
            let lhs = d.f.mul(&self.dl(&a)).mul(&d.f_inv);
            let rhs = self
                .dl_op(&self.sa_inv(&a))
                .map_slot(&self.s, 0)
                .map_slot(&self.s, 1);
            if lhs != rhs {
                return fail("(1.12)", format!("at {}: {} vs {}", self.alg.label(i), lhs, rhs));
            }
        }

        // (1.13) fΔ(α) = γ and Δ(β)f⁻¹ = δ
        {
            let lhs = d.f.mul(&self.dl(&self.alpha));
            if lhs != d.gamma {
                return fail("(1.13)γ", format!("{} vs {}", lhs, d.gamma));
            }
            let lhs = self.dl(&self.beta).mul(&d.f_inv);
            if lhs != d.delta_el {
                return fail("(1.13)δ", format!("{} vs {}", lhs, d.delta_el));
            }
        }

        // (1.17) φ_f = (S⊗S⊗S)(φ^{321})
        {
            let lhs = self.twisted_phi(&d.f, &d.f_inv);
            let rhs = self
                .phi
                .embed(&[2, 1, 0], 3)
                .map_slot(&self.s, 0)
                .map_slot(&self.s, 1)
                .map_slot(&self.s, 2);
            if lhs != rhs {
                return fail("(1.17)", format!("{} vs {}", lhs, rhs));
            }
        }

        // (1.15) hΔ(a)h⁻¹ = (S⁻¹⊗S⁻¹)(Δᵒᵖ(S(a)))
        for i in 0..dim {
            let a = self.basis(i);
            let lhs = d.h.mul(&self.dl(&a)).mul(&d.h_inv);
            let rhs = self
                .dl_op(&self.sa(&a))
                .map_slot(&self.s_inv, 0)
                .map_slot(&self.s_inv, 1);
            if lhs != rhs {
                return fail("(1.15)", format!("at {}: {} vs {}", self.alg.label(i), lhs, rhs));
            }
        }

        // (1.18) φ_h = (S⁻¹⊗S⁻¹⊗S⁻¹)(φ^{321})
        {
            let lhs = self.twisted_phi(&d.h, &d.h_inv);
            let rhs = self
                .phi
                .embed(&[2, 1, 0], 3)
                .map_slot(&self.s_inv, 0)
                .map_slot(&self.s_inv, 1)
                .map_slot(&self.s_inv, 2);
            if lhs != rhs {
                return fail("(1.18)", format!("{} vs {}", lhs, rhs));
            }
        }

        // (1.22)–(1.23') intertwiner relations, quantified over basis a
        for i in 0..dim {
            let a = self.basis(i);
            let mut lhs = self.alg.zero_elem(2);
            for (j, k, c) in &self.delta_rows[i] {
                let t = self
                    .sa_inv(&self.basis(*k))
                    .embed(&[1], 2)
                    .mul(&d.q_r)
                    .mul(&self.dl(&self.basis(*j)));
                lhs = lhs.add(&t.scale(c));
            }
            let rhs = a.embed(&[0], 2).mul(&d.q_r);
            if lhs != rhs {
                return fail("(1.22)", format!("at {}: {} vs {}", self.alg.label(i), lhs, rhs));
            }

            let mut lhs = self.alg.zero_elem(2);
            for (j, k, c) in &self.delta_rows[i] {
                let t = self
                    .dl(&self.basis(*j))
                    .mul(&d.p_r)
                    .mul(&self.sa(&self.basis(*k)).embed(&[1], 2));
                lhs = lhs.add(&t.scale(c));
            }
            let rhs = d.p_r.mul(&a.embed(&[0], 2));
            if lhs != rhs {
                return fail("(1.22')", format!("at {}: {} vs {}", self.alg.label(i), lhs, rhs));
            }

            let mut lhs = self.alg.zero_elem(2);
            for (j, k, c) in &self.delta_rows[i] {
                let t = self
                    .sa(&self.basis(*j))
                    .embed(&[0], 2)
                    .mul(&d.q_l)
                    .mul(&self.dl(&self.basis(*k)));
                lhs = lhs.add(&t.scale(c));
            }
            let rhs = a.embed(&[1], 2).mul(&d.q_l);
            if lhs != rhs {
                return fail("(1.23)", format!("at {}: {} vs {}", self.alg.label(i), lhs, rhs));
            }

            let mut lhs = self.alg.zero_elem(2);
            for (j, k, c) in &self.delta_rows[i] {
                let t = self
                    .dl(&self.basis(*k))
                    .mul(&d.p_l)
                    .mul(&self.sa_inv(&self.basis(*j)).embed(&[0], 2));
                lhs = lhs.add(&t.scale(c));
            }
            let rhs = d.p_l.mul(&a.embed(&[1], 2));
            if lhs != rhs {
                return fail("(1.23')", format!("at {}: {} vs {}", self.alg.label(i), lhs, rhs));
            }
        }

        // (1.24), (1.25) inverse relations
        {
            let mut acc = self.alg.zero_elem(2);
            for (idx, c) in d.q_r.iter_nonzero() {
                let (j, k) = (idx / dim, idx % dim);
                let t = self
                    .dl(&self.basis(j))
                    .mul(&d.p_r)
                    .mul(&self.sa(&self.basis(k)).embed(&[1], 2));
                acc = acc.add(&t.scale(c));
            }
            if acc != one2 {
                return fail("(1.24)L", format!("got {}", acc));
            }

            let mut acc = self.alg.zero_elem(2);
            for (idx, c) in d.p_r.iter_nonzero() {
                let (j, k) = (idx / dim, idx % dim);
                let t = self
                    .sa_inv(&self.basis(k))
                    .embed(&[1], 2)
                    .mul(&d.q_r)
                    .mul(&self.dl(&self.basis(j)));
                acc = acc.add(&t.scale(c));
            }
            if acc != one2 {
                return fail("(1.24)R", format!("got {}", acc));
            }

            let mut acc = self.alg.zero_elem(2);
            for (idx, c) in d.q_l.iter_nonzero() {
                let (j, k) = (idx / dim, idx % dim);
                let t = self
                    .dl(&self.basis(k))
                    .mul(&d.p_l)
                    .mul(&self.sa_inv(&self.basis(j)).embed(&[0], 2));
                acc = acc.add(&t.scale(c));
            }
            if acc != one2 {
                return fail("(1.25)L", format!("got {}", acc));
            }

            let mut acc = self.alg.zero_elem(2);
            for (idx, c) in d.p_l.iter_nonzero() {
                let (j, k) = (idx / dim, idx % dim);
                let t = self
                    .sa(&self.basis(j))
                    .embed(&[0], 2)
                    .mul(&d.q_l)
                    .mul(&self.dl(&self.basis(k)));
                acc = acc.add(&t.scale(c));
            }
            if acc != one2 {
                return fail("(1.25)R", format!("got {}", acc));
            }
        }

        // (1.26)
        {
            let lhs = d
                .q_r
                .embed(&[0, 1], 3)
                .mul(&d.q_r.map_slot(&self.delta, 0))
                .mul(&self.phi_inv);
            let mut rhs = self.alg.zero_elem(3);
            for (idx, c) in self.phi.iter_nonzero() {
                let z = idx % dim;
                let y = (idx / dim) % dim;
                let x = idx / (dim * dim);
                let head = self
                    .sa_inv(&self.basis(z))
                    .tensor(&self.sa_inv(&self.basis(y)))
                    .embed(&[1, 2], 3);
                let t = head
                    .mul(&d.h.embed(&[1, 2], 3))
                    .mul(&d.q_r.mul(&self.dl(&self.basis(x))).map_slot(&self.delta, 1));
                rhs = rhs.add(&t.scale(c));
            }
            if lhs != rhs {
                return fail("(1.26)", format!("{} vs {}", lhs, rhs));
            }
        }

        // (2.22)–(2.25)
        for i in 0..dim {
            let a = self.basis(i);
            let lhs = d.u.mul(&self.sa(&a).embed(&[1], 2));
            let mut rhs = self.alg.zero_elem(2);
            for (j, k, c) in &self.delta_rows[i] {
                let t = self
                    .dl(&self.sa(&self.basis(*j)))
                    .mul(&d.u)
                    .mul(&self.basis(*k).embed(&[0], 2));
                rhs = rhs.add(&t.scale(c));
            }
            if lhs != rhs {
                return fail("(2.22)", format!("at {}: {} vs {}", self.alg.label(i), lhs, rhs));
            }

            let lhs = self.sa_inv(&a).embed(&[1], 2).mul(&d.v);
            let mut rhs = self.alg.zero_elem(2);
            for (j, k, c) in &self.delta_rows[i] {
                let t = self
                    .basis(*k)
                    .embed(&[0], 2)
                    .mul(&d.v)
                    .mul(&self.dl(&self.sa_inv(&self.basis(*j))));
                rhs = rhs.add(&t.scale(c));
            }
            if lhs != rhs {
                return fail("(2.23)", format!("at {}: {} vs {}", self.alg.label(i), lhs, rhs));
            }
        }
        {
            let lhs = self
                .phi_inv
                .mul(&d.u.map_slot(&self.delta, 1))
                .mul(&d.u.embed(&[1, 2], 3));
            let mut rhs = self.alg.zero_elem(3);
            for (idx, c) in self.phi.iter_nonzero() {
                let z = idx % dim;
                let y = (idx / dim) % dim;
                let x = idx / (dim * dim);
                let t = self
                    .dl(&self.sa(&self.basis(x)))
                    .mul(&d.u)
                    .map_slot(&self.delta, 0)
                    .mul(&self.basis(y).tensor(&self.basis(z)).embed(&[0, 1], 3));
                rhs = rhs.add(&t.scale(c));
            }
            if lhs != rhs {
                return fail("(2.24)", format!("{} vs {}", lhs, rhs));
            }

            let lhs = d.v.map_slot(&self.delta, 0).mul(&self.phi_inv);
            let mut rhs = self.alg.zero_elem(3);
            for (idx, c) in self.phi.iter_nonzero() {
                let z = idx % dim;
                let y = (idx / dim) % dim;
                let x = idx / (dim * dim);
                let t = self
                    .basis(y)
                    .tensor(&self.basis(z))
                    .embed(&[0, 1], 3)
                    .mul(&d.v.embed(&[1, 2], 3))
                    .mul(
                        &d.v.mul(&self.dl(&self.sa_inv(&self.basis(x))))
                            .map_slot(&self.delta, 1),
                    );
                rhs = rhs.add(&t.scale(c));
            }
            if lhs != rhs {
                return fail("(2.25)", format!("{} vs {}", lhs, rhs));
            }
        }

        // (h1), (h2)
        {
            let mut rhs = self.alg.zero_elem(2);
            for (idx, c) in d.q_l.iter_nonzero() {
                let (j, k) = (idx / dim, idx % dim);
                let t = self
                    .basis(k)
                    .embed(&[0], 2)
                    .mul(&d.v)
                    .mul(&self.dl(&self.sa_inv(&self.basis(j))));
                rhs = rhs.add(&t.scale(c));
            }
            if d.q_r != rhs {
                return fail("(h1)", format!("{} vs {}", d.q_r, rhs));
            }

            let mut rhs = self.alg.zero_elem(2);
            for (idx, c) in d.p_l.iter_nonzero() {
                let (j, k) = (idx / dim, idx % dim);
                let t = self
                    .dl(&self.sa(&self.basis(j)))
                    .mul(&d.u)
                    .mul(&self.basis(k).embed(&[0], 2));
                rhs = rhs.add(&t.scale(c));
            }
            if d.p_r != rhs {
                return fail("(h2)", format!("{} vs {}", d.p_r, rhs));
            }
        }

        Ok(())
    }

    /// The twisted reassociator (1⊗F)·(id⊗Δ)(F)·φ·(Δ⊗id)(F̄)·(F̄⊗1).
    fn twisted_phi(&self, f: &Element, f_inv: &Element) -> Element {
        f.embed(&[1, 2], 3)
            .mul(&f.map_slot(&self.delta, 1))
            .mul(&self.phi)
            .mul(&f_inv.map_slot(&self.delta, 0))
            .mul(&f_inv.embed(&[0, 1], 3))
    }

    /// Twist by an invertible F ∈ H⊗H with (ε⊗id)(F) = (id⊗ε)(F) = 1:
    /// Δ_F = FΔ(·)F⁻¹ with the induced reassociator and antipode data
    /// α_F = S(F̄¹)αF̄², β_F = F¹βS(F²). The result is revalidated.
    pub fn twist(&self, f: &Element) -> Result<QuasiHopf> {
        assert_eq!(f.degree(), 2);
        let one1 = self.alg.unit_elem(1);
        if f.map_slot(&self.counit, 0) != one1 || f.map_slot(&self.counit, 1) != one1 {
            return Err(Error::InvalidInput(
                "twist requires (ε⊗id)(F) = (id⊗ε)(F) = 1".into(),
            ));
        }
        let f_inv = f
            .invert()
            .ok_or_else(|| Error::NonInvertible("twist element is not invertible".into()))?;

        let dim = self.dim();
        let images: Vec<Element> = (0..dim)
            .map(|i| f.mul(&self.dl(&self.basis(i))).mul(&f_inv))
            .collect();
        let delta_f = LinMap::from_basis_images(&self.alg, 1, &images);
        let phi_f = self.twisted_phi(f, &f_inv);

        let mut alpha_f = self.alg.zero_elem(1);
        for (idx, c) in f_inv.iter_nonzero() {
            let (j, k) = (idx / dim, idx % dim);
            alpha_f = alpha_f.add(
                &self
                    .sa(&self.basis(j))
                    .mul(&self.alpha)
                    .mul(&self.basis(k))
                    .scale(c),
            );
        }
        let mut beta_f = self.alg.zero_elem(1);
        for (idx, c) in f.iter_nonzero() {
            let (j, k) = (idx / dim, idx % dim);
            beta_f = beta_f.add(
                &self
                    .basis(j)
                    .mul(&self.beta)
                    .mul(&self.sa(&self.basis(k)))
                    .scale(c),
            );
        }

        let out = QuasiHopf::assemble(
            Arc::clone(&self.alg),
            delta_f,
            self.counit.clone(),
            phi_f,
            None,
            self.s.clone(),
            None,
            alpha_f,
            beta_f,
        )?;
        let rep = out.validate();
        if let Some(fail) = rep.first_failure() {
            return Err(Error::IdentityFailed {
                identity: fail.id.clone(),
                witness: fail.witness.clone().unwrap_or_default(),
            });
        }
        Ok(out)
    }

    /// The opposite quasi-Hopf algebra: opposite multiplication with
    /// φ_op = φ⁻¹, S_op = S⁻¹, α_op = S⁻¹(β), β_op = S⁻¹(α).
    pub fn opposite(&self) -> Result<QuasiHopf> {
        let op = self.alg.opposite();
        let delta = LinMap::new(&op, 1, 2, self.delta.matrix().clone());
        let counit = LinMap::new(&op, 1, 0, self.counit.matrix().clone());
        let s_op = LinMap::new(&op, 1, 1, self.s_inv.matrix().clone());
        let s_op_inv = LinMap::new(&op, 1, 1, self.s.matrix().clone());
        let phi_op = op.elem(3, self.phi_inv.coeffs().to_vec());
        let phi_op_inv = op.elem(3, self.phi.coeffs().to_vec());
        let alpha_op = op.elem(1, self.sa_inv(&self.beta).coeffs().to_vec());
        let beta_op = op.elem(1, self.sa_inv(&self.alpha).coeffs().to_vec());
        QuasiHopf::assemble(
            op,
            delta,
            counit,
            phi_op,
            Some(phi_op_inv),
            s_op,
            Some(s_op_inv),
            alpha_op,
            beta_op,
        )
    }

    /// Δ̄(a) := V·Δ(a)·U, the deformed coproduct.
    pub fn deformed_coproduct(&self, a: &Element) -> Result<Element> {
        let d = self.derived()?;
        Ok(d.v.mul(&self.dl(a)).mul(&d.u))
    }

    /// Matrix of Δ̄ as a LinMap(1→2).
    pub fn deformed_coproduct_map(&self) -> Result<LinMap> {
        let images: Vec<Element> = (0..self.dim())
            .map(|i| self.deformed_coproduct(&self.basis(i)))
            .collect::<Result<_>>()?;
        Ok(LinMap::from_basis_images(&self.alg, 1, &images))
    }

    /// The star product ⟨φ*ψ | a⟩ := ⟨φ⊗ψ | Δ̄(a)⟩ on the dual
    /// (generally non-associative).
    pub fn star(&self, f: &DualElement, g: &DualElement) -> Result<DualElement> {
        let mut out = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            let db = self.deformed_coproduct(&self.basis(i))?;
            out.push(db.contract(f, 0).contract(g, 0).as_scalar().clone());
        }
        Ok(self.alg.dual_elem(out))
    }
}

impl fmt::Debug for QuasiHopf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "QuasiHopf(dim {}, {}, φ {})",
            self.dim(),
            self.spec(),
            if self.phi == self.alg.unit_elem(3) {
                "trivial"
            } else {
                "nontrivial"
            }
        )
    }
}

/// Solves the antipode equations for (α, β) given the rest of the
/// structure: the linear space of α satisfying the left equation of (1.7)
/// is scanned (echelon basis vectors, ±pairwise combinations, and the full
/// basis sum), and for each candidate the remaining constraints — right
/// (1.7) and both normalizations (1.8) — form a linear system for β.
/// Returns normalized representatives with ε(α) = 1 where possible.
pub fn solve_antipode_data(
    alg: &Arc<Algebra>,
    delta: &LinMap,
    counit: &LinMap,
    phi: &Element,
    s: &LinMap,
) -> Result<Vec<(Element, Element)>> {
    let dim = alg.dim();
    let spec = alg.spec();
    let phi_inv = phi
        .invert()
        .ok_or_else(|| Error::NonInvertible("reassociator is not invertible".into()))?;

    let delta_rows: Vec<Vec<(usize, usize, Scalar)>> = (0..dim)
        .map(|i| {
            delta
                .apply(&alg.basis_elem(i))
                .iter_nonzero()
                .map(|(idx, c)| (idx / dim, idx % dim, c.clone()))
                .collect()
        })
        .collect();
    let eps = |i: usize| counit.apply(&alg.basis_elem(i)).as_scalar().clone();

    // stacked operator for the left equation of (1.7): for every basis a,
    // α ↦ Σ S(a₍₁₎) α a₍₂₎ − ε(a) α
    let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        let mut m = crate::linalg::Matrix::zero(spec, dim, dim);
        for (j, k, c) in &delta_rows[i] {
            let l = alg.left_mult_matrix(&s.apply(&alg.basis_elem(*j)));
            let r = alg.right_mult_matrix(&alg.basis_elem(*k));
            m = &m + &(&l * &r).scale(c);
        }
        let e = eps(i);
        m = &m - &crate::linalg::Matrix::identity(spec, dim).scale(&e);
        for r in 0..dim {
            rows.push(m.row(r).to_vec());
        }
    }
    let stacked = crate::linalg::Matrix::from_rows(spec, &rows);
    let alpha_space = stacked.nullspace();
    if alpha_space.is_empty() {
        return Err(Error::EmptySolution("no candidate for α".into()));
    }

    // scan set over the α solution space
    let mut candidates: Vec<Vec<Scalar>> = Vec::new();
    for v in &alpha_space {
        candidates.push(v.clone());
    }
    for i in 0..alpha_space.len() {
        for j in i + 1..alpha_space.len() {
            let sum: Vec<Scalar> = alpha_space[i]
                .iter()
                .zip(&alpha_space[j])
                .map(|(a, b)| a + b)
                .collect();
            let diff: Vec<Scalar> = alpha_space[i]
                .iter()
                .zip(&alpha_space[j])
                .map(|(a, b)| a - b)
                .collect();
            candidates.push(sum);
            candidates.push(diff);
        }
    }
    if alpha_space.len() > 2 {
        let mut total = vec![spec.zero(); dim];
        for v in &alpha_space {
            for (t, x) in total.iter_mut().zip(v) {
                *t = &*t + x;
            }
        }
        candidates.push(total);
    }

    let unit = alg.unit_elem(1);
    let mut found: Vec<(Element, Element)> = Vec::new();
    for cand in candidates {
        let alpha = alg.elem(1, cand);
        if alpha.is_zero() {
            continue;
        }
        // linear system for β: right (1.7) homogeneous + both (1.8) affine
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        let mut rhs: Vec<Scalar> = Vec::new();
        for i in 0..dim {
            let mut m = crate::linalg::Matrix::zero(spec, dim, dim);
            for (j, k, c) in &delta_rows[i] {
                let l = alg.left_mult_matrix(&alg.basis_elem(*j));
                let r = alg.right_mult_matrix(&s.apply(&alg.basis_elem(*k)));
                m = &m + &(&l * &r).scale(c);
            }
            let e = eps(i);
            m = &m - &crate::linalg::Matrix::identity(spec, dim).scale(&e);
            for r in 0..dim {
                rows.push(m.row(r).to_vec());
                rhs.push(spec.zero());
            }
        }
        // (1.8) left: Σ_φ X β S(Y) α Z = 1
        {
            let mut m = crate::linalg::Matrix::zero(spec, dim, dim);
            for (idx, c) in phi.iter_nonzero() {
                let z = idx % dim;
                let y = (idx / dim) % dim;
                let x = idx / (dim * dim);
                let l = alg.left_mult_matrix(&alg.basis_elem(x));
                let tail = s
                    .apply(&alg.basis_elem(y))
                    .mul(&alpha)
                    .mul(&alg.basis_elem(z));
                let r = alg.right_mult_matrix(&tail);
                m = &m + &(&r * &l).scale(c);
            }
            for r in 0..dim {
                rows.push(m.row(r).to_vec());
                rhs.push(unit.coeffs()[r].clone());
            }
        }
        // (1.8) right: Σ_{φ⁻¹} S(X̄) α Ȳ β S(Z̄) = 1
        {
            let mut m = crate::linalg::Matrix::zero(spec, dim, dim);
            for (idx, c) in phi_inv.iter_nonzero() {
                let z = idx % dim;
                let y = (idx / dim) % dim;
                let x = idx / (dim * dim);
                let head = s
                    .apply(&alg.basis_elem(x))
                    .mul(&alpha)
                    .mul(&alg.basis_elem(y));
                let l = alg.left_mult_matrix(&head);
                let r = alg.right_mult_matrix(&s.apply(&alg.basis_elem(z)));
                m = &m + &(&l * &r).scale(c);
            }
            for r in 0..dim {
                rows.push(m.row(r).to_vec());
                rhs.push(unit.coeffs()[r].clone());
            }
        }
        let system = crate::linalg::Matrix::from_rows(spec, &rows);
        let Ok(Some(beta_coeffs)) = system.solve(&rhs) else {
            continue;
        };
        let beta = alg.elem(1, beta_coeffs);

        // normalize to ε(α) = 1 when possible
        let ea = counit.apply(&alpha).as_scalar().clone();
        let (alpha, beta) = if !ea.is_zero() && !ea.is_one() {
            let inv = ea.inv().unwrap();
            (alpha.scale(&inv), beta.scale(&ea))
        } else {
            (alpha, beta)
        };
        if found.iter().any(|(a, b)| *a == alpha && *b == beta) {
            continue;
        }
        found.push((alpha, beta));
    }

    if found.is_empty() {
        return Err(Error::EmptySolution(
            "no (α, β) satisfies the antipode equations with this S".into(),
        ));
    }
    Ok(found)
}
