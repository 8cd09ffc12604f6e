//! Integral theory across the bundled instances: integrals, cointegrals,
//! modulus, Fourier transforms, the semisimplicity battery, symmetry and
//! Radford's formula, and cocentral forms.

use std::sync::Arc;

use qhopf::cocentral::{cocentral_forms, cocentral_space_dim, sigma_report};
use qhopf::construct::{gallery, GALLERY};
use qhopf::integral::{
    cointegral, fourier, integral_spaces, modulus, radford, right_integral_projection,
    semisimplicity_battery, symmetry_check, SymmetryVerdict,
};
use qhopf::scalar::FieldSpec;
use qhopf::QuasiHopf;

fn arc(name: &str) -> Arc<QuasiHopf> {
    Arc::new(gallery(name).unwrap())
}

#[test]
fn integral_spaces_are_one_dimensional_everywhere() {
    for name in GALLERY {
        let h = arc(name);
        let spaces = integral_spaces(&h, &[]).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(spaces.left.len(), 1, "{name}");
        assert_eq!(spaces.right.len(), 1, "{name}");
        // oracle: the basis vectors satisfy the defining property directly
        let l = &spaces.left[0];
        let r = &spaces.right[0];
        for i in 0..h.dim() {
            let a = h.basis(i);
            assert_eq!(a.mul(l), l.scale(&h.eps(&a)), "{name} left at {i}");
            assert_eq!(r.mul(&a), r.scale(&h.eps(&a)), "{name} right at {i}");
        }
    }
}

#[test]
fn z3_group_sum_integral() {
    let h = arc("group_z3");
    let spaces = integral_spaces(&h, &[]).unwrap();
    let q = FieldSpec::rationals();
    let sum = h.algebra().elem(1, vec![q.one(), q.one(), q.one()]);
    assert_eq!(spaces.left[0], sum);
    assert_eq!(spaces.right[0], sum);
}

#[test]
fn cointegral_suite_passes_everywhere() {
    for name in GALLERY {
        let h = arc(name);
        let (co, rep) = cointegral(&h).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(rep.all_passed(), "{name}: {rep}");
        // pairing normalization
        assert!(co.lambda.pair(&co.r).is_one(), "{name}");
        let (_, rep) = right_integral_projection(&h, &co).unwrap();
        assert!(rep.all_passed(), "{name}: {rep}");
    }
}

#[test]
fn twisted_dual_z2_cointegral_is_nondegenerate() {
    let h = arc("twisted_dual_z2");
    let (co, _) = cointegral(&h).unwrap();
    // ω_R-matrix invertibility was asserted inside; check the Frobenius
    // basis reproduces the identity both ways on a sample element
    let q = FieldSpec::rationals();
    let x = h.basis(0).add(&h.basis(1).scale(&q.from_i64(3)));
    let dim = h.dim();
    let mut acc = h.algebra().zero_elem(1);
    for (idx, c) in co.frobenius_q.iter_nonzero() {
        let (u, v) = (idx / dim, idx % dim);
        let l = co.lambda.pair(&x.mul(&h.basis(u)));
        acc = acc.add(&h.basis(v).scale(&(&l * c)));
    }
    assert_eq!(acc, x);
}

#[test]
fn modulus_is_counit_on_all_bundled_instances() {
    // group algebras and duals of abelian groups are unimodular
    for name in GALLERY {
        let h = arc(name);
        let (co, _) = cointegral(&h).unwrap();
        let (mu, rep) = modulus(&h, &co).unwrap();
        assert!(rep.all_passed(), "{name}: {rep}");
        assert_eq!(mu, h.counit_dual(), "{name}");
    }
}

#[test]
fn fourier_suite_passes_everywhere() {
    for name in GALLERY {
        let h = arc(name);
        let (co, _) = cointegral(&h).unwrap();
        let (mu, _) = modulus(&h, &co).unwrap();
        let (_, rep) = fourier(&h, &co, &mu).unwrap();
        assert!(rep.all_passed(), "{name}: {rep}");
    }
}

#[test]
fn fourier_on_z2_is_the_classical_matrix() {
    // λ = b^e, S = id: F_λ(a) = a⇀λ pairs group elements with evaluations:
    // F(e) = b^e, F(g): ⟨g⇀b^e|x⟩ = b^e(xg) → b^g; the matrix is a
    // permutation pairing the group with its characters in dual coordinates
    let h = arc("group_z2");
    let (co, _) = cointegral(&h).unwrap();
    let (mu, _) = modulus(&h, &co).unwrap();
    let (fd, _) = fourier(&h, &co, &mu).unwrap();
    let q = FieldSpec::rationals();
    assert_eq!(fd.f.mul_vec(h.basis(0).coeffs()), vec![q.one(), q.zero()]);
    assert_eq!(fd.f.mul_vec(h.basis(1).coeffs()), vec![q.zero(), q.one()]);
}

#[test]
fn semisimplicity_dichotomy_for_z3() {
    // over ℚ: semisimple with Haar integral (e+g+g²)/3 and λ_e = 3λ
    let h = arc("group_z3");
    let (co, _) = cointegral(&h).unwrap();
    let (data, rep) = semisimplicity_battery(&h, &co).unwrap();
    assert!(rep.all_passed(), "{rep}");
    assert!(data.semisimple);
    assert_eq!(data.trace_form_semisimple, Some(true));
    let q = FieldSpec::rationals();
    let third = q.parse("1/3").unwrap();
    let haar = h
        .algebra()
        .elem(1, vec![third.clone(), third.clone(), third]);
    assert_eq!(data.haar.unwrap(), haar);
    assert_eq!(
        data.lambda_e,
        co.lambda.scale(&q.from_i64(3)),
        "λ_e = 3λ for k[ℤ/3]"
    );

    // over GF(3): λ_e = 0, not semisimple, no normalized integral
    let h3 = arc("group_z3_gf3");
    let (co3, _) = cointegral(&h3).unwrap();
    let (data3, rep3) = semisimplicity_battery(&h3, &co3).unwrap();
    assert!(rep3.all_passed(), "{rep3}");
    assert!(!data3.semisimple);
    assert!(data3.lambda_e.is_zero());
    assert!(data3.haar.is_none());
    assert_eq!(data3.trace_form_semisimple, None);
    // no normalized left integral: ε vanishes on L
    let spaces = integral_spaces(&h3, &[]).unwrap();
    assert!(h3.eps(&spaces.left[0]).is_zero());
}

#[test]
fn twisted_dual_z2_is_semisimple_with_quantum_dimension_two() {
    let h = arc("twisted_dual_z2");
    let (co, _) = cointegral(&h).unwrap();
    let (data, rep) = semisimplicity_battery(&h, &co).unwrap();
    assert!(rep.all_passed(), "{rep}");
    assert!(data.semisimple);
    // oracle: d_H = λ_e(βS(α)) with β² = 1, so λ_e(β·S(1)... ) = Tr(L_1) = 2
    assert_eq!(data.quantum_dim, "2");
}

#[test]
fn battery_passes_on_remaining_instances() {
    for name in ["group_z2", "group_s3", "twisted_dual_z3_gf7"] {
        let h = arc(name);
        let (co, _) = cointegral(&h).unwrap();
        let (data, rep) = semisimplicity_battery(&h, &co).unwrap();
        assert!(rep.all_passed(), "{name}: {rep}");
        assert!(data.semisimple, "{name}");
    }
}

#[test]
fn symmetry_on_commutative_and_s3() {
    for name in ["group_z2", "group_z3", "group_s3", "twisted_dual_z2"] {
        let h = arc(name);
        let (co, _) = cointegral(&h).unwrap();
        let (mu, _) = modulus(&h, &co).unwrap();
        let (data, rep) = symmetry_check(&h, &co, &mu).unwrap();
        assert!(rep.all_passed(), "{name}: {rep}");
        assert_eq!(data.verdict, SymmetryVerdict::Symmetric, "{name}");
        // S² = id on these, so g = 1 is among the valid witnesses; the
        // scan returns some invertible solution
        let g = data.witness.unwrap();
        for i in 0..h.dim() {
            let lhs = g.mul(&h.basis(i));
            let rhs = h.sa(&h.sa(&h.basis(i))).mul(&g);
            assert_eq!(lhs, rhs, "{name} witness fails at basis {i}");
        }
    }
}

#[test]
fn radford_suite_passes_everywhere() {
    for name in GALLERY {
        let h = arc(name);
        let (co, _) = cointegral(&h).unwrap();
        let (mu, _) = modulus(&h, &co).unwrap();
        let (data, rep) = radford(&h, &co, &mu).unwrap();
        assert!(rep.all_passed(), "{name}: {rep}");
        assert_eq!(data.u.mul(&data.u_inv), h.unit(), "{name}");
        assert_eq!(data.u_inv.mul(&data.u), h.unit(), "{name}");
    }
}

#[test]
fn radford_u_is_unit_for_hopf_group_algebras() {
    for name in ["group_z2", "group_z3", "group_s3"] {
        let h = arc(name);
        let (co, _) = cointegral(&h).unwrap();
        let (mu, _) = modulus(&h, &co).unwrap();
        let (data, _) = radford(&h, &co, &mu).unwrap();
        assert_eq!(data.u, h.unit(), "{name}");
    }
}

#[test]
fn radford_u_is_central_on_twisted_dual_z2() {
    // S² = id forces (6.2) to degenerate to centrality of u
    let h = arc("twisted_dual_z2");
    let (co, _) = cointegral(&h).unwrap();
    let (mu, _) = modulus(&h, &co).unwrap();
    let (data, _) = radford(&h, &co, &mu).unwrap();
    for i in 0..h.dim() {
        assert_eq!(
            data.u.mul(&h.basis(i)),
            h.basis(i).mul(&data.u),
            "u not central at basis {i}"
        );
    }
}

#[test]
fn cocentral_forms_suite() {
    for name in GALLERY {
        let h = arc(name);
        let (co, _) = cointegral(&h).unwrap();
        let (mu, _) = modulus(&h, &co).unwrap();
        let (data, rep) = cocentral_forms(&h, &co, &mu).unwrap();
        assert!(rep.all_passed(), "{name}: {rep}");
        assert_eq!(data.space_dim, 1, "{name}");
        // normalized λ₀ exists iff λ(S⁻¹(α)β) ≠ 0; cross-check with d_H
        // in the semisimple characteristic-zero cases
        let (ss, _) = semisimplicity_battery(&h, &co).unwrap();
        if ss.semisimple {
            assert_eq!(
                data.normalized.is_some(),
                ss.quantum_dim != "0",
                "{name}: normalized cointegral vs quantum dimension"
            );
        }
        if let Some(l0) = &data.normalized {
            let norm = l0.pair(&h.sa_inv(h.alpha()).mul(h.beta()));
            assert!(norm.is_one(), "{name}");
        }
    }
}

#[test]
fn cocentral_space_vanishes_for_non_modulus_characters() {
    // sign character of k[S₃] ≠ μ = ε: the form space on H⊗H_sgn is zero
    let h = arc("group_s3");
    let spec = h.spec();
    let sgn: Vec<_> = (0..6)
        .map(|i| {
            let g = h.basis(i);
            let order2 = g.mul(&g) == h.unit() && g != h.unit();
            spec.from_i64(if order2 { -1 } else { 1 })
        })
        .collect();
    let sgn = h.algebra().dual_elem(sgn);
    assert!(h.character_witness(&sgn).is_none());
    assert_eq!(cocentral_space_dim(&h, &sgn).unwrap(), 0);
    // while on H⊗H_μ it is one-dimensional
    assert_eq!(cocentral_space_dim(&h, &h.counit_dual()).unwrap(), 1);
}

#[test]
fn user_supplied_characters_are_verified() {
    let h = arc("group_s3");
    let bogus = h.algebra().dual_basis(2);
    assert!(integral_spaces(&h, &[bogus]).is_err());
    let eps = h.counit_dual();
    let spaces = integral_spaces(&h, &[eps]).unwrap();
    assert_eq!(spaces.by_character[0].len(), 1);
}

#[test]
fn sigma_report_requires_character() {
    let h = arc("group_z2");
    let spec = h.spec();
    let bogus = h.algebra().dual_basis(1);
    assert!(sigma_report(&h, &bogus, &vec![spec.zero(); 4]).is_err());
}

#[test]
fn twist_preserves_integral_dimension_and_semisimplicity() {
    // gauge the twisted dual of ℤ/2 by a counit-normalized invertible F
    let h = arc("twisted_dual_z2");
    let alg = h.algebra();
    // F = 1⊗1 + c·(p⊗p) with p = δ0δ1-free rank-one piece: use
    // p = δ0 − δ1 (ε(p) = 1 − 0 = 1? ε(δ0)=1, ε(δ1)=0 → ε(p)=1), so
    // correct to keep (ε⊗id)F = 1: take F = 1⊗1 + δ1⊗δ1 (ε(δ1) = 0)
    let d1 = alg.basis_elem(1);
    let f = alg.unit_elem(2).add(&d1.tensor(&d1));
    let t = Arc::new(h.twist(&f).unwrap());
    assert!(t.validate().all_passed());
    let spaces = integral_spaces(&t, &[]).unwrap();
    assert_eq!(spaces.left.len(), 1);
    assert_eq!(spaces.right.len(), 1);
    let (co_t, rep) = cointegral(&t).unwrap();
    assert!(rep.all_passed(), "{rep}");
    let (ss_t, _) = semisimplicity_battery(&t, &co_t).unwrap();
    let (co, _) = cointegral(&h).unwrap();
    let (ss, _) = semisimplicity_battery(&h, &co).unwrap();
    assert_eq!(ss_t.semisimple, ss.semisimple);

    // and on a Hopf instance
    let hs = arc("group_z3");
    let g1 = hs.basis(1);
    let e1 = g1.sub(&hs.basis(2)); // ε = 0
    let f = hs.algebra().unit_elem(2).add(&e1.tensor(&e1));
    if f.invert().is_some() {
        let t = Arc::new(hs.twist(&f).unwrap());
        let spaces = integral_spaces(&t, &[]).unwrap();
        assert_eq!(spaces.left.len(), 1);
        let (co_t, _) = cointegral(&t).unwrap();
        let (ss_t, _) = semisimplicity_battery(&t, &co_t).unwrap();
        assert!(ss_t.semisimple);
    }
}
