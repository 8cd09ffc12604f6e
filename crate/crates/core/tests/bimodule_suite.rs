//! Bimodule axioms, the projection E with Prop 2.3, coinvariants, the
//! structure isomorphism ν, tensor products over H, and dual bimodules.

use std::sync::Arc;

use qhopf::bimodule::{Bimodule, LeftBimodule, LeftModule};
use qhopf::bitensor::{coherence_square, coinvariant_tensor_maps, tensor_over_h};
use qhopf::construct::{gallery, twisted_dual, Cocycle3, GroupTable, GALLERY};
use qhopf::linalg::Matrix;
use qhopf::scalar::FieldSpec;

fn arc(name: &str) -> Arc<qhopf::QuasiHopf> {
    Arc::new(gallery(name).unwrap())
}

#[test]
fn regular_bimodule_validates_everywhere() {
    for name in GALLERY {
        let h = arc(name);
        let m = Bimodule::regular(&h);
        let rep = m.validate();
        assert!(rep.all_passed(), "{name}: {rep}");
        let rep = m.projection_report().unwrap();
        assert!(rep.all_passed(), "{name}: {rep}");
    }
}

#[test]
fn v_tensor_h_from_left_module_validates() {
    for name in ["group_s3", "twisted_dual_z2", "twisted_dual_z3_gf7"] {
        let h = arc(name);
        let v = LeftModule::regular(&h);
        assert!(v.validate().all_passed());
        let m = Bimodule::from_left_module(&v);
        let rep = m.validate();
        assert!(rep.all_passed(), "{name}: {rep}");
    }
}

#[test]
fn flipped_coaction_on_noncocommutative_instance_fails() {
    // dual group algebra of S₃ (trivial cocycle twist): Δ noncocommutative
    let q = FieldSpec::rationals();
    let g = GroupTable::symmetric(3);
    let triv = Cocycle3::new(&g, q, &[]).unwrap();
    let h = Arc::new(twisted_dual(&g, &triv, q).unwrap());
    let m = Bimodule::regular(&h);
    assert!(m.validate().all_passed());

    // replace ρ = Δ by the flipped coproduct
    let dim = h.dim();
    let mut flipped = Matrix::zero(h.spec(), dim * dim, dim);
    for i in 0..dim {
        for (j, k, c) in h.delta_rows(i) {
            flipped.set(*k * dim + *j, i, c.clone());
        }
    }
    let mut left = Matrix::zero(h.spec(), dim, dim * dim);
    let mut right = Matrix::zero(h.spec(), dim, dim * dim);
    for a in 0..dim {
        for mm in 0..dim {
            for (k, c) in h.algebra().basis_product(a, mm) {
                left.set(*k, a * dim + mm, c.clone());
            }
            for (k, c) in h.algebra().basis_product(mm, a) {
                right.set(*k, mm * dim + a, c.clone());
            }
        }
    }
    let bad = Bimodule::new(Arc::clone(&h), dim, left, right, flipped);
    let rep = bad.validate();
    assert!(!rep.all_passed());
    let first = rep.first_failure().unwrap();
    assert_eq!(first.id, "Def2.1:bimodule-map");
    assert!(first.witness.is_some());
}

#[test]
fn projection_on_v_tensor_h_kills_the_h_leg() {
    // E(v⊗x) = v⊗ε(x)1
    let h = arc("twisted_dual_z2");
    let v = LeftModule::regular(&h);
    let m = Bimodule::from_left_module(&v);
    let dim = h.dim();
    let spec = h.spec();
    for vi in 0..v.vdim() {
        for x in 0..dim {
            let mut vec = vec![spec.zero(); m.mdim()];
            vec[vi * dim + x] = spec.one();
            let img = m.project(&vec).unwrap();
            // expected: ε(b_x)·(v ⊗ 1)
            let eps = h.eps(&h.basis(x));
            let mut expected = vec![spec.zero(); m.mdim()];
            for (hh, u) in h.unit().iter_nonzero() {
                expected[vi * dim + hh] = &eps * u;
            }
            assert_eq!(img, expected);
        }
    }
}

#[test]
fn hopf_projection_is_classical() {
    // on (H,Δ) for k[ℤ/2]: E(m) = m₀S(m₁), E(1) = 1, image = span{1}
    let h = arc("group_z2");
    let m = Bimodule::regular(&h);
    let spec = h.spec();
    let e = m.projector().unwrap();
    let one = h.unit();
    assert_eq!(e.mul_vec(one.coeffs()), one.coeffs().to_vec());
    for i in 0..h.dim() {
        let mut em = vec![spec.zero(); 2];
        em[i] = spec.one();
        let mut classical = vec![spec.zero(); 2];
        for (j, k, c) in h.delta_rows(i) {
            let t = h.basis(*j).mul(&h.sa(&h.basis(*k))).scale(c);
            for (r, x) in t.coeffs().iter().enumerate() {
                classical[r] = &classical[r] + x;
            }
        }
        assert_eq!(e.mul_vec(&em), classical);
    }
    let coinv = m.coinvariants().unwrap();
    assert_eq!(coinv.basis.len(), 1);
    assert_eq!(coinv.basis[0], one.coeffs().to_vec());
}

#[test]
fn coinvariants_of_v_tensor_h_have_module_dimension() {
    let h = arc("twisted_dual_z3_gf7");
    let v = LeftModule::regular(&h);
    let m = Bimodule::from_left_module(&v);
    let coinv = m.coinvariants().unwrap();
    assert_eq!(coinv.basis.len(), v.vdim());
}

#[test]
fn h_gamma_bimodule() {
    // γ = ε gives T_ε = 1⊗1 and ρ_ε = Δ
    let h = arc("twisted_dual_z2");
    let eps = h.counit_dual();
    let m = Bimodule::h_gamma(&h, &eps).unwrap();
    assert!(m.validate().all_passed());
    let t = qhopf::bimodule::t_of_character(&h, &eps);
    assert_eq!(t, h.algebra().unit_elem(2));
    let coinv = m.coinvariants().unwrap();
    assert_eq!(coinv.basis.len(), 1);

    // sign character of k[S₃]
    let hs = arc("group_s3");
    let spec = hs.spec();
    let sgn: Vec<_> = (0..6)
        .map(|i| {
            let g = hs.basis(i);
            let order2 = g.mul(&g) == hs.unit() && g != hs.unit();
            spec.from_i64(if order2 { -1 } else { 1 })
        })
        .collect();
    let sgn = hs.algebra().dual_elem(sgn);
    let m = Bimodule::h_gamma(&hs, &sgn).unwrap();
    assert!(m.validate().all_passed());
    assert_eq!(m.coinvariants().unwrap().basis.len(), 1);

    // a non-character is rejected
    let not_char = hs.algebra().dual_basis(1);
    assert!(Bimodule::h_gamma(&hs, &not_char).is_err());
}

#[test]
fn nu_is_an_isomorphism() {
    for name in GALLERY {
        let h = arc(name);
        let m = Bimodule::regular(&h);
        let maps = m.nu().unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(maps.nu.rank(), m.mdim(), "{name}");
    }
    // and on V⊗H, where ν∘ν⁻¹ must be the identity of size vdim·dim
    let h = arc("twisted_dual_z2");
    let v = LeftModule::regular(&h);
    let m = Bimodule::from_left_module(&v);
    let maps = m.nu().unwrap();
    assert_eq!(
        &maps.nu * &maps.nu_inv,
        Matrix::identity(h.spec(), m.mdim())
    );
}

#[test]
fn tensor_over_h_of_regulars() {
    // H⊗_H H ≅ H: quotient dimension = dim H, coinvariants 1-dimensional
    let h = arc("group_z2");
    let m = Bimodule::regular(&h);
    let n = Bimodule::regular(&h);
    let t = tensor_over_h(&m, &n).unwrap();
    assert_eq!(t.bimodule.mdim(), h.dim());
    assert!(t.bimodule.validate().all_passed());
    let coinv = t.bimodule.coinvariants().unwrap();
    assert_eq!(coinv.basis.len(), 1);
    let maps = coinvariant_tensor_maps(&m, &n, &t).unwrap();
    assert_eq!(maps.i_mn.rank(), 1);
}

#[test]
fn tensor_over_h_of_free_bimodules() {
    // dim(M⊗_H N) = dim M · dim N / dim H for free instances
    let h = arc("twisted_dual_z2");
    let v = LeftModule::regular(&h);
    let m = Bimodule::from_left_module(&v);
    let n = Bimodule::regular(&h);
    let t = tensor_over_h(&m, &n).unwrap();
    assert_eq!(t.bimodule.mdim(), m.mdim() * n.mdim() / h.dim());
    assert!(t.bimodule.validate().all_passed());
    coinvariant_tensor_maps(&m, &n, &t).unwrap();
}

#[test]
fn coherence_square_on_regular_triples() {
    for name in ["group_z2", "twisted_dual_z2"] {
        let h = arc(name);
        let m = Bimodule::regular(&h);
        let n = Bimodule::regular(&h);
        let k = Bimodule::regular(&h);
        coherence_square(&m, &n, &k).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn left_regular_bimodule_validates() {
    for name in GALLERY {
        let h = arc(name);
        let k = LeftBimodule::regular(&h);
        let rep = k.validate();
        assert!(rep.all_passed(), "{name}: {rep}");
    }
}

#[test]
fn deformed_coaction_identities() {
    for name in ["group_s3", "twisted_dual_z2", "twisted_dual_z3_gf7"] {
        let h = arc(name);
        let k = LeftBimodule::regular(&h);
        let rep = k.deformed_coaction_report().unwrap();
        assert!(rep.all_passed(), "{name}: {rep}");
    }
}

#[test]
fn dual_bimodule_validates_and_pairs() {
    for name in GALLERY {
        let h = arc(name);
        let k = LeftBimodule::regular(&h);
        let dual = k.dual_bimodule().unwrap();
        let rep = dual.validate();
        assert!(rep.all_passed(), "{name}: {rep}");
        let rep = dual.projection_report().unwrap();
        assert!(rep.all_passed(), "{name}: {rep}");
        // Lemma 4.5 pairing exchange
        let rep = k.pairing_exchange_report(&dual).unwrap();
        assert!(rep.all_passed(), "{name}: {rep}");
    }
}

#[test]
fn dual_bimodule_coinvariants_are_one_dimensional() {
    // these are the cointegrals; Thm 3.6 forces dimension 1
    for name in ["group_z2", "twisted_dual_z2", "twisted_dual_z3_gf7"] {
        let h = arc(name);
        let k = LeftBimodule::regular(&h);
        let dual = k.dual_bimodule().unwrap();
        let coinv = dual.coinvariants().unwrap();
        assert_eq!(coinv.basis.len(), 1, "{name}");
        // ν: L⊗H → Ĥ is then an isomorphism
        let maps = dual.nu().unwrap();
        assert_eq!(maps.nu.rank(), h.dim(), "{name}");
    }
}

#[test]
fn hopf_dual_bimodule_is_classical() {
    // Hopf case: U = V = 1⊗1, so the dual coaction uses Λ̄ = Δ
    let h = arc("group_z2");
    let k = LeftBimodule::regular(&h);
    let lam_bar = k.deformed_coaction_matrix().unwrap();
    assert_eq!(&lam_bar, h.delta_map().matrix());
}
