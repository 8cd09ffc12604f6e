//! Tensor product M⊗_H N of quasi-Hopf bimodules: the quotient carrier,
//! the coinvariant isomorphism i_MN with inverse ī_MN, and the coherence
//! square for triple products.

use std::sync::Arc;

use crate::bimodule::{unit_vec, Bimodule};
use crate::error::{Error, Result};
use crate::linalg::{coords_in_span, Matrix};
use crate::scalar::Scalar;

/// M⊗_H N with the quotient data: `proj` maps M⊗N coordinates to quotient
/// coordinates (the non-pivot coordinates of the reduced representative),
/// `section` embeds a quotient coordinate as its representative in M⊗N.
pub struct TensorOverH {
    pub bimodule: Bimodule,
    pub proj: Matrix,
    pub section: Matrix,
}

/// Builds M⊗_H N: the quotient of M⊗N by span{(m·a)⊗n − m⊗(a·n)}, with
/// actions a·[m⊗n]·b = [(a·m)⊗(n·b)] and coaction
/// ρ[m⊗n] = [(m₀⊗n₀)]⊗m₁n₁.
pub fn tensor_over_h(m: &Bimodule, n: &Bimodule) -> Result<TensorOverH> {
    let h = Arc::clone(m.quasi_hopf());
    let dim = h.dim();
    let spec = h.spec();
    let (md, nd) = (m.mdim(), n.mdim());
    let full = md * nd;

    // relation rows (m·a)⊗n − m⊗(a·n)
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for mi in 0..md {
        let em = unit_vec(spec, md, mi);
        for a in 0..dim {
            let ma = m.act_right(&em, &h.basis(a));
            for ni in 0..nd {
                let en = unit_vec(spec, nd, ni);
                let an = n.act_left(&h.basis(a), &en);
                let mut row = vec![spec.zero(); full];
                for (r, c) in ma.iter().enumerate() {
                    if !c.is_zero() {
                        row[r * nd + ni] = &row[r * nd + ni] + c;
                    }
                }
                for (r, c) in an.iter().enumerate() {
                    if !c.is_zero() {
                        row[mi * nd + r] = &row[mi * nd + r] - c;
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let (rref, pivots) = if rows.is_empty() {
        (Matrix::zero(spec, 0, full), Vec::new())
    } else {
        Matrix::from_rows(spec, &rows).rref()
    };
    let free: Vec<usize> = (0..full).filter(|c| !pivots.contains(c)).collect();
    let qdim = free.len();

    // reduce a full vector modulo the relation row space, then read off
    // the free coordinates
    let reduce = |v: &[Scalar]| -> Vec<Scalar> {
        let mut v = v.to_vec();
        for (r, &p) in pivots.iter().enumerate() {
            if !v[p].is_zero() {
                let c = v[p].clone();
                for j in 0..full {
                    let x = rref.at(r, j);
                    if !x.is_zero() {
                        v[j] = &v[j] - &(&c * x);
                    }
                }
            }
        }
        free.iter().map(|&j| v[j].clone()).collect()
    };

    let mut proj = Matrix::zero(spec, qdim, full);
    for j in 0..full {
        let img = reduce(&unit_vec(spec, full, j));
        for (r, c) in img.into_iter().enumerate() {
            proj.set(r, j, c);
        }
    }
    let mut section = Matrix::zero(spec, full, qdim);
    for (q, &j) in free.iter().enumerate() {
        section.set(j, q, spec.one());
    }

    // quotient structure maps
    let mut left = Matrix::zero(spec, qdim, dim * qdim);
    let mut right = Matrix::zero(spec, qdim, qdim * dim);
    let mut rho = Matrix::zero(spec, qdim * dim, qdim);
    for (q, &j) in free.iter().enumerate() {
        let (mi, ni) = (j / nd, j % nd);
        let em = unit_vec(spec, md, mi);
        let en = unit_vec(spec, nd, ni);
        for a in 0..dim {
            // a·[m⊗n] = [(a·m)⊗n]
            let am = m.act_left(&h.basis(a), &em);
            let mut v = vec![spec.zero(); full];
            for (r, c) in am.iter().enumerate() {
                if !c.is_zero() {
                    v[r * nd + ni] = c.clone();
                }
            }
            for (r, c) in proj.mul_vec(&v).into_iter().enumerate() {
                left.set(r, a * qdim + q, c);
            }
            // [m⊗n]·a = [m⊗(n·a)]
            let na = n.act_right(&en, &h.basis(a));
            let mut v = vec![spec.zero(); full];
            for (r, c) in na.iter().enumerate() {
                if !c.is_zero() {
                    v[mi * nd + r] = c.clone();
                }
            }
            for (r, c) in proj.mul_vec(&v).into_iter().enumerate() {
                right.set(r, q * dim + a, c);
            }
        }
        // ρ[m⊗n] = [(m₀⊗n₀)]⊗m₁n₁
        let cm = m.coaction(&em);
        let cn = n.coaction(&en);
        for (vi, c1) in cm.iter().enumerate() {
            if c1.is_zero() {
                continue;
            }
            let (mr, h1) = (vi / dim, vi % dim);
            for (wi, c2) in cn.iter().enumerate() {
                if c2.is_zero() {
                    continue;
                }
                let (nr, h2) = (wi / dim, wi % dim);
                let mut v = vec![spec.zero(); full];
                v[mr * nd + nr] = spec.one();
                let qv = proj.mul_vec(&v);
                for (hk, hc) in h.algebra().basis_product(h1, h2) {
                    for (r, c) in qv.iter().enumerate() {
                        if !c.is_zero() {
                            let add = &(&(c1 * c2) * hc) * c;
                            let val = &(rho.at(r * dim + hk, q) + &add);
                            rho.set(r * dim + hk, q, val.clone());
                        }
                    }
                }
            }
        }
    }

    Ok(TensorOverH {
        bimodule: Bimodule::new(h, qdim, left, right, rho),
        proj,
        section,
    })
}

/// The mutually inverse maps of Lemma 2.8 between M^{coH}⊗N^{coH} and
/// (M⊗_H N)^{coH}, with their identity suite.
pub struct CoinvariantTensorMaps {
    /// i_MN: coordinates in (M-coinv basis)⊗(N-coinv basis) → quotient
    pub i_mn: Matrix,
    /// ī_MN: quotient → coordinates in the coinvariant bases
    pub i_bar: Matrix,
}

/// i_MN(m⊗n) = (X▷m)⊗_H(Y▷n)·Z and ī_MN[m⊗n] = E_M(m₀)⊗E_N(m₁·n).
pub fn coinvariant_tensor_maps(
    m: &Bimodule,
    n: &Bimodule,
    t: &TensorOverH,
) -> Result<CoinvariantTensorMaps> {
    let h = Arc::clone(m.quasi_hopf());
    let dim = h.dim();
    let spec = h.spec();
    let (md, nd) = (m.mdim(), n.mdim());
    let full = md * nd;
    let qdim = t.bimodule.mdim();

    let co_m = m.coinvariants()?;
    let co_n = n.coinvariants()?;
    let (km, kn) = (co_m.basis.len(), co_n.basis.len());

    // i_MN columns over the coinvariant-pair basis
    let mut i_mn = Matrix::zero(spec, qdim, km * kn);
    for (jm, bm) in co_m.basis.iter().enumerate() {
        for (jn, bn) in co_n.basis.iter().enumerate() {
            let mut acc = vec![spec.zero(); full];
            for (pidx, c) in h.phi().iter_nonzero() {
                let z = pidx % dim;
                let y = (pidx / dim) % dim;
                let x = pidx / (dim * dim);
                let xm = m.adjoint(&h.basis(x), bm)?;
                let yn = n.act_right(&n.adjoint(&h.basis(y), bn)?, &h.basis(z));
                for (r1, c1) in xm.iter().enumerate() {
                    if c1.is_zero() {
                        continue;
                    }
                    for (r2, c2) in yn.iter().enumerate() {
                        if c2.is_zero() {
                            continue;
                        }
                        let j = r1 * nd + r2;
                        acc[j] = &acc[j] + &(&(c * c1) * c2);
                    }
                }
            }
            for (r, c) in t.proj.mul_vec(&acc).into_iter().enumerate() {
                i_mn.set(r, jm * kn + jn, c);
            }
        }
    }

    // ī_MN on quotient basis vectors via section representatives
    let mut i_bar = Matrix::zero(spec, km * kn, qdim);
    for q in 0..qdim {
        let rep = t.section.mul_vec(&unit_vec(spec, qdim, q));
        let mut acc = vec![spec.zero(); km * kn];
        for (j, c) in rep.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (mi, ni) = (j / nd, j % nd);
            let cm = m.coaction(&unit_vec(spec, md, mi));
            for (vi, c1) in cm.iter().enumerate() {
                if c1.is_zero() {
                    continue;
                }
                let (mr, hh) = (vi / dim, vi % dim);
                let em = co_m
                    .projector
                    .mul_vec(&unit_vec(spec, md, mr));
                let em_coords = coords_in_span(spec, &co_m.basis, &em)
                    .ok_or_else(|| Error::Validation("E_M image leaves its span".into()))?;
                let en = n.project(&n.act_left(&h.basis(hh), &unit_vec(spec, nd, ni)))?;
                let en_coords = coords_in_span(spec, &co_n.basis, &en)
                    .ok_or_else(|| Error::Validation("E_N image leaves its span".into()))?;
                for (rm, xm) in em_coords.iter().enumerate() {
                    if xm.is_zero() {
                        continue;
                    }
                    for (rn, xn) in en_coords.iter().enumerate() {
                        if xn.is_zero() {
                            continue;
                        }
                        let idx = rm * kn + rn;
                        acc[idx] = &acc[idx] + &(&(c * c1) * &(xm * xn));
                    }
                }
            }
        }
        for (r, c) in acc.into_iter().enumerate() {
            i_bar.set(r, q, c);
        }
    }

    // (a) ī∘i = id
    if &i_bar * &i_mn != Matrix::identity(spec, km * kn) {
        return Err(Error::IdentityFailed {
            identity: "Lem2.8(a)".into(),
            witness: "ī∘i ≠ id".into(),
        });
    }
    // (b) i∘ī = E_{M⊗N}
    let e_t = t.bimodule.projector()?;
    if &i_mn * &i_bar != e_t {
        return Err(Error::IdentityFailed {
            identity: "Lem2.8(b)".into(),
            witness: "i∘ī ≠ E".into(),
        });
    }
    // H-linearity: a▷i(m⊗n) = i(a₁▷m ⊗ a₂▷n)
    for a in 0..dim {
        for jm in 0..km {
            for jn in 0..kn {
                let col = i_mn.mul_vec(&unit_vec(spec, km * kn, jm * kn + jn));
                let lhs = t.bimodule.adjoint(&h.basis(a), &col)?;
                let mut rhs_coords = vec![spec.zero(); km * kn];
                for (a1, a2, c) in h.delta_rows(a) {
                    let am = m.adjoint(&h.basis(*a1), &co_m.basis[jm])?;
                    let an = n.adjoint(&h.basis(*a2), &co_n.basis[jn])?;
                    let am_c = coords_in_span(spec, &co_m.basis, &am)
                        .ok_or_else(|| Error::Validation("adjoint leaves coinvariants".into()))?;
                    let an_c = coords_in_span(spec, &co_n.basis, &an)
                        .ok_or_else(|| Error::Validation("adjoint leaves coinvariants".into()))?;
                    for (rm, xm) in am_c.iter().enumerate() {
                        for (rn, xn) in an_c.iter().enumerate() {
                            let v = &(xm * xn) * c;
                            if !v.is_zero() {
                                let idx = rm * kn + rn;
                                rhs_coords[idx] = &rhs_coords[idx] + &v;
                            }
                        }
                    }
                }
                let rhs = i_mn.mul_vec(&rhs_coords);
                if lhs != rhs {
                    return Err(Error::IdentityFailed {
                        identity: "Lem2.8(H-linear)".into(),
                        witness: format!("fails at (a={a}, m={jm}, n={jn})"),
                    });
                }
            }
        }
    }

    Ok(CoinvariantTensorMaps { i_mn, i_bar })
}

/// The coherence square for triples of coinvariants:
/// i_{(M⊗N)K}∘(i_MN⊗id) agrees with
/// i_{M(N⊗K)}∘(id⊗i_NK) precomposed with the φ-twisted triple action.
pub fn coherence_square(m: &Bimodule, n: &Bimodule, k: &Bimodule) -> Result<()> {
    let h = Arc::clone(m.quasi_hopf());
    let dim = h.dim();
    let spec = h.spec();

    let mn = tensor_over_h(m, n)?;
    let nk = tensor_over_h(n, k)?;
    let mn_k = tensor_over_h(&mn.bimodule, k)?;
    let m_nk = tensor_over_h(m, &nk.bimodule)?;

    let maps_mn = coinvariant_tensor_maps(m, n, &mn)?;
    let maps_nk = coinvariant_tensor_maps(n, k, &nk)?;
    let maps_mn_k = coinvariant_tensor_maps(&mn.bimodule, k, &mn_k)?;
    let maps_m_nk = coinvariant_tensor_maps(m, &nk.bimodule, &m_nk)?;

    let co_m = m.coinvariants()?;
    let co_n = n.coinvariants()?;
    let co_k = k.coinvariants()?;
    let co_mn = mn.bimodule.coinvariants()?;
    let co_nk = nk.bimodule.coinvariants()?;
    let (km, kn, kk) = (co_m.basis.len(), co_n.basis.len(), co_k.basis.len());

    // representatives of the two nested quotients in common M⊗N⊗K coords
    let expand_left = |v: &[Scalar]| -> Vec<Scalar> {
        debug_assert_eq!(v.len(), mn_k.bimodule.mdim());
        let w = mn_k.section.mul_vec(v); // (MN-quotient)⊗K coords
        let mut out = vec![spec.zero(); m.mdim() * n.mdim() * k.mdim()];
        for (j, c) in w.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (qi, ki) = (j / k.mdim(), j % k.mdim());
            let rep = mn.section.mul_vec(&unit_vec(spec, mn.bimodule.mdim(), qi));
            for (r, x) in rep.iter().enumerate() {
                if !x.is_zero() {
                    out[r * k.mdim() + ki] = &out[r * k.mdim() + ki] + &(c * x);
                }
            }
        }
        out
    };
    let expand_right = |v: &[Scalar]| -> Vec<Scalar> {
        debug_assert_eq!(v.len(), m_nk.bimodule.mdim());
        let w = m_nk.section.mul_vec(v); // M⊗(NK-quotient) coords
        let mut out = vec![spec.zero(); m.mdim() * n.mdim() * k.mdim()];
        for (j, c) in w.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (mi, qi) = (j / nk.bimodule.mdim(), j % nk.bimodule.mdim());
            let rep = nk.section.mul_vec(&unit_vec(spec, nk.bimodule.mdim(), qi));
            for (r, x) in rep.iter().enumerate() {
                if !x.is_zero() {
                    let idx = (mi * n.mdim() + r / k.mdim()) * k.mdim() + r % k.mdim();
                    out[idx] = &out[idx] + &(c * x);
                }
            }
        }
        out
    };
    // quotient projections of M⊗N⊗K through either bracketing agree on
    // representatives; compare after projecting both to (M⊗N)⊗K route
    let project_left = |v: &[Scalar]| -> Vec<Scalar> {
        // M⊗N⊗K → (M⊗_H N)⊗K → quotient
        let mut mid = vec![spec.zero(); mn.bimodule.mdim() * k.mdim()];
        for (j, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (mnj, ki) = (j / k.mdim(), j % k.mdim());
            let q = mn.proj.mul_vec(&unit_vec(spec, m.mdim() * n.mdim(), mnj));
            for (r, x) in q.iter().enumerate() {
                if !x.is_zero() {
                    mid[r * k.mdim() + ki] = &mid[r * k.mdim() + ki] + &(c * x);
                }
            }
        }
        mn_k.proj.mul_vec(&mid)
    };

    for jm in 0..km {
        for jn in 0..kn {
            for jk in 0..kk {
                // left route: i_MN(m⊗n) then i_{(MN)K}(·⊗k)
                let imn_col = maps_mn
                    .i_mn
                    .mul_vec(&unit_vec(spec, km * kn, jm * kn + jn));
                let imn_coords = coords_in_span(spec, &co_mn.basis, &imn_col)
                    .ok_or_else(|| Error::Validation("i_MN image not coinvariant".into()))?;
                let mut lhs = vec![spec.zero(); mn_k.bimodule.mdim()];
                for (r, x) in imn_coords.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let col = maps_mn_k
                        .i_mn
                        .mul_vec(&unit_vec(spec, co_mn.basis.len() * kk, r * kk + jk));
                    for (o, c) in lhs.iter_mut().zip(col) {
                        *o = &*o + &(&c * x);
                    }
                }

                // right route: Σ_φ (X▷m) ⊗ i_NK(Y▷n ⊗ Z▷k) through i_{M(NK)}
                let mut rhs_full = vec![spec.zero(); m.mdim() * n.mdim() * k.mdim()];
                for (pidx, c) in h.phi().iter_nonzero() {
                    let z = pidx % dim;
                    let y = (pidx / dim) % dim;
                    let x = pidx / (dim * dim);
                    let xm = m.adjoint(&h.basis(x), &co_m.basis[jm])?;
                    let xm_c = coords_in_span(spec, &co_m.basis, &xm).unwrap();
                    let yn = n.adjoint(&h.basis(y), &co_n.basis[jn])?;
                    let yn_c = coords_in_span(spec, &co_n.basis, &yn).unwrap();
                    let zk = k.adjoint(&h.basis(z), &co_k.basis[jk])?;
                    let zk_c = coords_in_span(spec, &co_k.basis, &zk).unwrap();
                    // i_NK(Y▷n ⊗ Z▷k) in NK-quotient coords
                    let mut ynzk = vec![spec.zero(); kn * kk];
                    for (rn, cn) in yn_c.iter().enumerate() {
                        for (rk, ck) in zk_c.iter().enumerate() {
                            let v = cn * ck;
                            if !v.is_zero() {
                                ynzk[rn * kk + rk] = &ynzk[rn * kk + rk] + &v;
                            }
                        }
                    }
                    let ink = maps_nk.i_mn.mul_vec(&ynzk);
                    let ink_coords = coords_in_span(spec, &co_nk.basis, &ink).unwrap();
                    // through i_{M(NK)}
                    let mut pair = vec![spec.zero(); km * co_nk.basis.len()];
                    for (rm, cm) in xm_c.iter().enumerate() {
                        for (rq, cq) in ink_coords.iter().enumerate() {
                            let v = cm * cq;
                            if !v.is_zero() {
                                let idx = rm * co_nk.basis.len() + rq;
                                pair[idx] = &pair[idx] + &v;
                            }
                        }
                    }
                    let img = maps_m_nk.i_mn.mul_vec(&pair);
                    let expanded = expand_right(&img);
                    for (o, e) in rhs_full.iter_mut().zip(expanded) {
                        *o = &*o + &(&e * c);
                    }
                }
                let rhs = project_left(&rhs_full);
                let lhs_full = expand_left(&lhs);
                let lhs = project_left(&lhs_full);
                if lhs != rhs {
                    return Err(Error::IdentityFailed {
                        identity: "Prop2.9".into(),
                        witness: format!("coherence square fails at ({jm},{jn},{jk})"),
                    });
                }
            }
        }
    }
    Ok(())
}
