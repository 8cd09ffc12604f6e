//! Instance factory: group algebras as quasi-Hopf objects, ω-twisted dual
//! group algebras from normalized 3-cocycles, cocycle validation, and the
//! bundled example gallery.

use std::sync::Arc;

use crate::algebra::{Algebra, Element, LinMap};
use crate::error::{Error, Result};
use crate::quasihopf::{solve_antipode_data, QuasiHopf};
use crate::scalar::{FieldSpec, Scalar};

/// A finite group by multiplication table.
#[derive(Clone, Debug)]
pub struct GroupTable {
    order: usize,
    mul: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    labels: Vec<String>,
}

impl GroupTable {
    /// Validates associativity, a two-sided identity and inverses.
    pub fn new(mul: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<GroupTable> {
        let n = mul.len();
        if n == 0 || mul.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("multiplication table is not square".into()));
        }
        if mul.iter().flatten().any(|&x| x >= n) {
            return Err(Error::InvalidInput("table entry out of range".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mul[e][x] == x && mul[x][e] == x))
            .ok_or_else(|| Error::InvalidInput("no identity element".into()))?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(Error::InvalidInput(format!(
                            "non-associative table at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        let mut inverse = vec![usize::MAX; n];
        for a in 0..n {
            inverse[a] = (0..n)
                .find(|&b| mul[a][b] == identity && mul[b][a] == identity)
                .ok_or_else(|| Error::InvalidInput(format!("element {a} has no inverse")))?;
        }
        let labels = labels.unwrap_or_else(|| (0..n).map(|i| format!("g{i}")).collect());
        if labels.len() != n {
            return Err(Error::InvalidInput("label count mismatch".into()));
        }
        Ok(GroupTable {
            order: n,
            mul,
            identity,
            inverse,
            labels,
        })
    }

    pub fn cyclic(n: usize) -> GroupTable {
        assert!(n >= 1);
        let mul = (0..n)
            .map(|i| (0..n).map(|j| (i + j) % n).collect())
            .collect();
        let labels = (0..n)
            .map(|i| match i {
                0 => "e".to_string(),
                1 => "g".to_string(),
                _ => format!("g{i}"),
            })
            .collect();
        GroupTable::new(mul, Some(labels)).unwrap()
    }

    /// The symmetric group on n letters, permutations in lexicographic
    /// order, labeled by cycle notation.
    pub fn symmetric(n: usize) -> GroupTable {
        assert!((1..=5).contains(&n));
        let mut perms: Vec<Vec<usize>> = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            perms.push(cur.clone());
            // next lexicographic permutation
            let Some(i) = (0..n - 1).rev().find(|&i| cur[i] < cur[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        let index_of = |p: &[usize]| perms.iter().position(|q| q == p).unwrap();
        let mul = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    // composition a∘b acting on points: (a∘b)(x) = a(b(x))
                    .map(|b| index_of(&(0..n).map(|x| a[b[x]]).collect::<Vec<_>>()))
                    .collect()
            })
            .collect();
        let labels = perms.iter().map(|p| cycle_notation(p)).collect();
        GroupTable::new(mul, Some(labels)).unwrap()
    }

    pub fn direct_product(&self, other: &GroupTable) -> GroupTable {
        let n = self.order * other.order;
        let idx = |a: usize, b: usize| a * other.order + b;
        let mut mul = vec![vec![0; n]; n];
        for a1 in 0..self.order {
            for b1 in 0..other.order {
                for a2 in 0..self.order {
                    for b2 in 0..other.order {
                        mul[idx(a1, b1)][idx(a2, b2)] =
                            idx(self.mul[a1][a2], other.mul[b1][b2]);
                    }
                }
            }
        }
        let labels = (0..self.order)
            .flat_map(|a| {
                (0..other.order)
                    .map(move |b| (a, b))
            })
            .map(|(a, b)| format!("{}.{}", self.labels[a], other.labels[b]))
            .collect();
        GroupTable::new(mul, Some(labels)).unwrap()
    }

    pub fn order(&self) -> usize {
        self.order
    }
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }
    pub fn identity(&self) -> usize {
        self.identity
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn table(&self) -> &Vec<Vec<usize>> {
        &self.mul
    }
}

fn cycle_notation(p: &[usize]) -> String {
    let n = p.len();
    let mut seen = vec![false; n];
    let mut out = String::new();
    for start in 0..n {
        if seen[start] || p[start] == start {
            seen[start] = true;
            continue;
        }
        out.push('(');
        let mut x = start;
        loop {
            seen[x] = true;
            out.push_str(&(x + 1).to_string());
            x = p[x];
            if x == start {
                break;
            }
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push('e');
    }
    out
}

/// A 3-cochain ω: G³ → k×, dense by index triple.
#[derive(Clone, Debug)]
pub struct Cocycle3 {
    order: usize,
    values: Vec<Scalar>,
}

impl Cocycle3 {
    /// Builds from sparse entries; missing triples default to 1. All
    /// values must be nonzero.
    pub fn new(
        g: &GroupTable,
        spec: FieldSpec,
        entries: &[(usize, usize, usize, Scalar)],
    ) -> Result<Cocycle3> {
        let n = g.order();
        let mut values = vec![spec.one(); n * n * n];
        for (a, b, c, v) in entries {
            if *a >= n || *b >= n || *c >= n {
                return Err(Error::InvalidInput(format!(
                    "cocycle index ({a},{b},{c}) out of range"
                )));
            }
            if v.spec() != spec {
                return Err(Error::FieldMismatch(spec.to_string(), v.spec().to_string()));
            }
            if v.is_zero() {
                return Err(Error::InvalidInput("cocycle value 0".into()));
            }
            values[(a * n + b) * n + c] = v.clone();
        }
        Ok(Cocycle3 { order: n, values })
    }

    pub fn value(&self, a: usize, b: usize, c: usize) -> &Scalar {
        &self.values[(a * self.order + b) * self.order + c]
    }

    /// ω(h,k,l)·ω(g,hk,l)·ω(g,h,k) = ω(gh,k,l)·ω(g,h,kl) on all quadruples.
    pub fn abstract_check(&self, g: &GroupTable) -> Option<String> {
        let n = self.order;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let lhs = &(&(self.value(b, c, d) * self.value(a, g.mul(b, c), d))
                            * self.value(a, b, c));
                        let rhs = &(self.value(g.mul(a, b), c, d) * self.value(a, b, g.mul(c, d)));
                        if lhs != rhs {
                            return Some(format!(
                                "cocycle identity fails at ({}, {}, {}, {}): {} vs {}",
                                g.labels()[a],
                                g.labels()[b],
                                g.labels()[c],
                                g.labels()[d],
                                lhs,
                                rhs
                            ));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_normalized(&self, g: &GroupTable) -> bool {
        let n = self.order;
        let e = g.identity();
        (0..n).all(|a| {
            (0..n).all(|b| {
                self.value(e, a, b).is_one()
                    && self.value(a, e, b).is_one()
                    && self.value(a, b, e).is_one()
            })
        })
    }

    /// Shifts by coboundaries to the normalized representative
    /// (ω ≡ 1 whenever an argument is the identity). Requires a cocycle.
    pub fn normalize(&self, g: &GroupTable) -> Cocycle3 {
        let n = self.order;
        let e = g.identity();
        // first shift: b(x,y) = ω(x,y,e) clears the last slot
        let shift = |w: &Cocycle3, b: &dyn Fn(usize, usize) -> Scalar| -> Cocycle3 {
            let mut values = Vec::with_capacity(n * n * n);
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        let num = &(&b(y, z) * &b(x, g.mul(y, z))) * w.value(x, y, z);
                        let den = &b(g.mul(x, y), z) * &b(x, y);
                        values.push(&num * &den.inv().unwrap());
                    }
                }
            }
            Cocycle3 { order: n, values }
        };
        let w1 = shift(self, &|x, y| self.value(x, y, e).clone());
        // second shift divides by ω₁(e,·,·) and clears the remaining slots
        let mut values = Vec::with_capacity(n * n * n);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    values.push(w1.value(x, y, z) * &w1.value(e, y, z).inv().unwrap());
                }
            }
        }
        Cocycle3 { order: n, values }
    }
}

/// The Hopf group algebra k[G]: Δ(g) = g⊗g, ε(g) = 1, φ = 1⊗1⊗1,
/// S(g) = g⁻¹, α = β = 1.
pub fn group_algebra(g: &GroupTable, spec: FieldSpec) -> Result<QuasiHopf> {
    let n = g.order();
    let one = spec.one();
    let mul: Vec<_> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, g.mul(i, j), one.clone()))
        .collect();
    let mut unit = vec![spec.zero(); n];
    unit[g.identity()] = spec.one();
    let alg = Algebra::new(spec, g.labels().to_vec(), &mul, unit)?;

    let delta = LinMap::from_basis_images(
        &alg,
        1,
        &(0..n)
            .map(|i| alg.basis_elem(i).tensor(&alg.basis_elem(i)))
            .collect::<Vec<_>>(),
    );
    let counit = LinMap::from_basis_images(
        &alg,
        1,
        &(0..n).map(|_| alg.scalar_elem(spec.one())).collect::<Vec<_>>(),
    );
    let s = LinMap::from_basis_images(
        &alg,
        1,
        &(0..n).map(|i| alg.basis_elem(g.inv(i))).collect::<Vec<_>>(),
    );
    let phi = alg.unit_elem(3);
    let alpha = alg.unit_elem(1);
    let beta = alg.unit_elem(1);
    let h = QuasiHopf::assemble(
        Arc::clone(&alg),
        delta,
        counit,
        phi,
        None,
        s,
        None,
        alpha,
        beta,
    )?;
    let rep = h.validate();
    if let Some(f) = rep.first_failure() {
        return Err(Error::IdentityFailed {
            identity: f.id.clone(),
            witness: f.witness.clone().unwrap_or_default(),
        });
    }
    Ok(h)
}

/// Builds the function algebra on G with the convolution coproduct and the
/// cocycle reassociator, without antipode data.
fn twisted_dual_bialgebra(
    g: &GroupTable,
    omega: &Cocycle3,
    spec: FieldSpec,
) -> Result<(Arc<Algebra>, LinMap, LinMap, Element, LinMap)> {
    let n = g.order();
    let labels: Vec<String> = g.labels().iter().map(|l| format!("d{l}")).collect();
    let mul: Vec<_> = (0..n).map(|i| (i, i, i, spec.one())).collect();
    let unit = vec![spec.one(); n];
    let alg = Algebra::new(spec, labels, &mul, unit)?;

    let delta_imgs: Vec<Element> = (0..n)
        .map(|i| {
            let mut acc = alg.zero_elem(2);
            for h in 0..n {
                for k in 0..n {
                    if g.mul(h, k) == i {
                        acc = acc.add(&alg.basis_elem(h).tensor(&alg.basis_elem(k)));
                    }
                }
            }
            acc
        })
        .collect();
    let delta = LinMap::from_basis_images(&alg, 1, &delta_imgs);
    let counit_imgs: Vec<Element> = (0..n)
        .map(|i| {
            alg.scalar_elem(if i == g.identity() {
                spec.one()
            } else {
                spec.zero()
            })
        })
        .collect();
    let counit = LinMap::from_basis_images(&alg, 1, &counit_imgs);

    let mut phi = alg.zero_elem(3);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let t = alg
                    .basis_elem(a)
                    .tensor(&alg.basis_elem(b))
                    .tensor(&alg.basis_elem(c));
                phi = phi.add(&t.scale(omega.value(a, b, c)));
            }
        }
    }

    let s = LinMap::from_basis_images(
        &alg,
        1,
        &(0..n).map(|i| alg.basis_elem(g.inv(i))).collect::<Vec<_>>(),
    );
    Ok((alg, delta, counit, phi, s))
}

/// Verdict of [`cocycle_check`].
#[derive(Debug, Clone)]
pub struct CocycleVerdict {
    pub pass: bool,
    pub witness: Option<String>,
}

/// Passes iff the reassociator built from ω satisfies the pentagon
/// identity exactly; the abstract cocycle identity is evaluated as well
/// and the two routes must agree.
pub fn cocycle_check(g: &GroupTable, omega: &Cocycle3, spec: FieldSpec) -> Result<CocycleVerdict> {
    let abstract_witness = omega.abstract_check(g);
    let (alg, delta, _counit, phi, _s) = twisted_dual_bialgebra(g, omega, spec)?;
    let lhs = phi.map_slot(&delta, 2).mul(&phi.map_slot(&delta, 0));
    let rhs = phi
        .embed(&[1, 2, 3], 4)
        .mul(&phi.map_slot(&delta, 1))
        .mul(&phi.embed(&[0, 1, 2], 4));
    let pentagon_witness = (lhs != rhs).then(|| {
        let dim = alg.dim();
        // first differing coefficient, as a basis quadruple
        let mut w = String::new();
        for (idx, (l, r)) in lhs.coeffs().iter().zip(rhs.coeffs().iter()).enumerate() {
            if l != r {
                let d = idx % dim;
                let c = (idx / dim) % dim;
                let b = (idx / (dim * dim)) % dim;
                let a = idx / (dim * dim * dim);
                w = format!(
                    "(1.2) fails at {}⊗{}⊗{}⊗{}: {} vs {}",
                    alg.label(a),
                    alg.label(b),
                    alg.label(c),
                    alg.label(d),
                    l,
                    r
                );
                break;
            }
        }
        w
    });
    if abstract_witness.is_some() != pentagon_witness.is_some() {
        return Err(Error::Validation(
            "cocycle identity and pentagon identity disagree".into(),
        ));
    }
    Ok(CocycleVerdict {
        pass: pentagon_witness.is_none(),
        witness: pentagon_witness.or(abstract_witness),
    })
}

/// The ω-twisted dual group algebra: functions on G with pointwise
/// product, convolution coproduct, φ = Σ ω(g,h,l) δ_g⊗δ_h⊗δ_l,
/// S(δ_g) = δ_{g⁻¹}, and (α, β) solved from the antipode equations.
pub fn twisted_dual(g: &GroupTable, omega: &Cocycle3, spec: FieldSpec) -> Result<QuasiHopf> {
    let omega = if omega.is_normalized(g) {
        omega.clone()
    } else {
        let shifted = omega.normalize(g);
        if !shifted.is_normalized(g) {
            return Err(Error::InvalidInput(
                "cochain could not be normalized (not a cocycle?)".into(),
            ));
        }
        shifted
    };
    let verdict = cocycle_check(g, &omega, spec)?;
    if !verdict.pass {
        return Err(Error::IdentityFailed {
            identity: "(1.2)".into(),
            witness: verdict.witness.unwrap_or_default(),
        });
    }
    let (alg, delta, counit, phi, s) = twisted_dual_bialgebra(g, &omega, spec)?;
    let pairs = solve_antipode_data(&alg, &delta, &counit, &phi, &s)?;
    let (alpha, beta) = pairs
        .into_iter()
        .next()
        .expect("solve_antipode_data returns a nonempty list or errors");
    let h = QuasiHopf::assemble(alg, delta, counit, phi, None, s, None, alpha, beta)?;
    let rep = h.validate();
    if let Some(f) = rep.first_failure() {
        return Err(Error::IdentityFailed {
            identity: f.id.clone(),
            witness: f.witness.clone().unwrap_or_default(),
        });
    }
    Ok(h)
}

/// ω(a,b,c) = (−1)^{abc} on ℤ/2, the nontrivial cocycle class.
pub fn cocycle_z2_sign(spec: FieldSpec) -> Result<Cocycle3> {
    let g = GroupTable::cyclic(2);
    Cocycle3::new(&g, spec, &[(1, 1, 1, spec.from_i64(-1))])
}

/// The standard generator ω(a,b,c) = ζ^{a·⌊(b+c)/n⌋} on ℤ/n, with ζ a
/// primitive n-th root of unity in the field.
pub fn cocycle_zn_standard(n: usize, spec: FieldSpec) -> Result<Cocycle3> {
    let g = GroupTable::cyclic(n);
    let zeta = primitive_root_of_unity(spec, n)?;
    let mut entries = Vec::new();
    let mut pow = vec![spec.one()];
    for k in 1..n {
        pow.push(&pow[k - 1] * &zeta);
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let e = (a * ((b + c) / n)) % n;
                if e != 0 {
                    entries.push((a, b, c, pow[e].clone()));
                }
            }
        }
    }
    Cocycle3::new(&g, spec, &entries)
}

/// A primitive n-th root of unity, or an error when the field lacks one.
pub fn primitive_root_of_unity(spec: FieldSpec, n: usize) -> Result<Scalar> {
    if n == 1 {
        return Ok(spec.one());
    }
    if n == 2 {
        return Ok(spec.from_i64(-1));
    }
    match spec {
        FieldSpec::Rationals => Err(Error::Unsupported(format!(
            "Q has no primitive {n}-th root of unity; use GF(p) with p ≡ 1 mod {n}"
        ))),
        FieldSpec::PrimeField(p) => {
            if (p - 1) % n as u64 != 0 {
                return Err(Error::Unsupported(format!(
                    "GF({p}) has no primitive {n}-th root of unity"
                )));
            }
            for x in 2..p {
                let s = spec.from_i64(x as i64);
                let mut pow = s.clone();
                let mut ord = 1;
                while !pow.is_one() {
                    pow = &pow * &s;
                    ord += 1;
                    if ord > n {
                        break;
                    }
                }
                if ord == n {
                    return Ok(s);
                }
            }
            Err(Error::Unsupported(format!(
                "no order-{n} element found in GF({p})"
            )))
        }
    }
}

pub const GALLERY: &[&str] = &[
    "group_z2",
    "group_z3",
    "group_z3_gf3",
    "group_s3",
    "twisted_dual_z2",
    "twisted_dual_z3_gf7",
];

/// Bundled example instances by name.
pub fn gallery(name: &str) -> Result<QuasiHopf> {
    let q = FieldSpec::rationals();
    match name {
        "group_z2" => group_algebra(&GroupTable::cyclic(2), q),
        "group_z3" => group_algebra(&GroupTable::cyclic(3), q),
        "group_z3_gf3" => group_algebra(&GroupTable::cyclic(3), FieldSpec::prime_field(3)?),
        "group_s3" => group_algebra(&GroupTable::symmetric(3), q),
        "twisted_dual_z2" => {
            let g = GroupTable::cyclic(2);
            twisted_dual(&g, &cocycle_z2_sign(q)?, q)
        }
        "twisted_dual_z3_gf7" => {
            let f7 = FieldSpec::prime_field(7)?;
            let g = GroupTable::cyclic(3);
            twisted_dual(&g, &cocycle_zn_standard(3, f7)?, f7)
        }
        _ => Err(Error::InvalidInput(format!("unknown gallery instance {name:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_and_symmetric_tables() {
        let z4 = GroupTable::cyclic(4);
        assert_eq!(z4.mul(3, 2), 1);
        assert_eq!(z4.inv(1), 3);

        let s3 = GroupTable::symmetric(3);
        assert_eq!(s3.order(), 6);
        // noncommutative
        assert!((0..6).any(|a| (0..6).any(|b| s3.mul(a, b) != s3.mul(b, a))));
        // all elements have order dividing 6
        for a in 0..6 {
            let mut x = a;
            let mut ord = 1;
            while x != s3.identity() {
                x = s3.mul(x, a);
                ord += 1;
            }
            assert!([1, 2, 3].contains(&ord));
        }
    }

    #[test]
    fn group_algebra_z2_validates() {
        let h = gallery("group_z2").unwrap();
        assert!(h.validate().all_passed());
        assert_eq!(h.dim(), 2);
        // S² = id for group algebras
        let s2 = h.antipode().compose(h.antipode());
        assert_eq!(s2, LinMap::identity(h.algebra(), 1));
    }

    #[test]
    fn group_algebra_s3_validates() {
        let h = gallery("group_s3").unwrap();
        assert!(h.validate().all_passed());
        let s2 = h.antipode().compose(h.antipode());
        assert_eq!(s2, LinMap::identity(h.algebra(), 1));
    }

    #[test]
    fn z2_sign_cocycle_passes_check() {
        let q = FieldSpec::rationals();
        let g = GroupTable::cyclic(2);
        let w = cocycle_z2_sign(q).unwrap();
        let v = cocycle_check(&g, &w, q).unwrap();
        assert!(v.pass);

        // trivial cocycle passes too
        let triv = Cocycle3::new(&g, q, &[]).unwrap();
        assert!(cocycle_check(&g, &triv, q).unwrap().pass);
    }

    #[test]
    fn non_cocycle_fails_check_with_pentagon_witness() {
        // ω(a,b,c) = (−1)^{ab} is not a 3-cocycle on ℤ/2
        let q = FieldSpec::rationals();
        let g = GroupTable::cyclic(2);
        let w = Cocycle3::new(
            &g,
            q,
            &[
                (1, 1, 0, q.from_i64(-1)),
                (1, 1, 1, q.from_i64(-1)),
            ],
        )
        .unwrap();
        let v = cocycle_check(&g, &w, q).unwrap();
        assert!(!v.pass);
        assert!(v.witness.unwrap().contains("(1.2)"));
    }

    #[test]
    fn twisted_dual_z2_structure() {
        let h = gallery("twisted_dual_z2").unwrap();
        assert!(h.validate().all_passed());
        assert_eq!(h.dim(), 2);
        // genuinely quasi: φ ≠ 1⊗1⊗1
        assert_ne!(h.phi(), &h.algebra().unit_elem(3));
        // α = 1, β = δ0 − δ1 up to the solver's normalization
        assert_eq!(h.alpha(), &h.unit());
        let q = FieldSpec::rationals();
        let expected_beta = h
            .algebra()
            .elem(1, vec![q.one(), q.from_i64(-1)]);
        assert_eq!(h.beta(), &expected_beta);
    }

    #[test]
    fn twisted_dual_z3_gf7_validates() {
        let h = gallery("twisted_dual_z3_gf7").unwrap();
        assert!(h.validate().all_passed());
        assert_eq!(h.dim(), 3);
        assert_ne!(h.phi(), &h.algebra().unit_elem(3));
        assert_eq!(h.spec(), FieldSpec::prime_field(7).unwrap());
    }

    #[test]
    fn twisted_dual_trivial_cocycle_is_dual_group_algebra() {
        let q = FieldSpec::rationals();
        let g = GroupTable::cyclic(3);
        let triv = Cocycle3::new(&g, q, &[]).unwrap();
        let h = twisted_dual(&g, &triv, q).unwrap();
        assert!(h.validate().all_passed());
        assert_eq!(h.phi(), &h.algebra().unit_elem(3));
        assert_eq!(h.alpha(), &h.unit());
        assert_eq!(h.beta(), &h.unit());
    }

    #[test]
    fn normalization_shift() {
        // scale the ℤ/2 sign cocycle by a coboundary that denormalizes it,
        // then check normalize() recovers a normalized cocycle
        let q = FieldSpec::rationals();
        let g = GroupTable::cyclic(2);
        let w = cocycle_z2_sign(q).unwrap();
        // δb with b(1,1) = −1, b = 1 elsewhere
        let b = |x: usize, y: usize| -> Scalar {
            if x == 1 && y == 1 {
                q.from_i64(-1)
            } else {
                q.one()
            }
        };
        let mut entries = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    let v = &(&(&b(y, z) * &b(x, g.mul(y, z))) * w.value(x, y, z))
                        * &(&b(g.mul(x, y), z) * &b(x, y)).inv().unwrap();
                    if !v.is_one() {
                        entries.push((x, y, z, v));
                    }
                }
            }
        }
        let shifted = Cocycle3::new(&g, q, &entries).unwrap();
        // still a cocycle, possibly denormalized; normalize and validate
        assert!(shifted.abstract_check(&g).is_none());
        let norm = shifted.normalize(&g);
        assert!(norm.is_normalized(&g));
        assert!(norm.abstract_check(&g).is_none());
        // and it still twists to a valid quasi-Hopf algebra
        let h = twisted_dual(&g, &shifted, q).unwrap();
        assert!(h.validate().all_passed());
    }

    #[test]
    fn roots_of_unity() {
        let f7 = FieldSpec::prime_field(7).unwrap();
        let z = primitive_root_of_unity(f7, 3).unwrap();
        assert_eq!(z, f7.from_i64(2));
        assert!(primitive_root_of_unity(f7, 5).is_err());
        assert!(primitive_root_of_unity(FieldSpec::rationals(), 3).is_err());
    }

    #[test]
    fn wrong_antipode_on_s3_has_no_solution() {
        // S = identity map is not completable to antipode data on k[S₃]
        let q = FieldSpec::rationals();
        let g = GroupTable::symmetric(3);
        let h = group_algebra(&g, q).unwrap();
        let alg = h.algebra();
        let bad_s = LinMap::identity(alg, 1);
        let r = solve_antipode_data(alg, h.delta_map(), h.counit_map(), h.phi(), &bad_s);
        assert!(matches!(r, Err(Error::EmptySolution(_))));
    }

    #[test]
    fn group_algebra_solver_finds_unit_pair() {
        let q = FieldSpec::rationals();
        let g = GroupTable::symmetric(3);
        let h = group_algebra(&g, q).unwrap();
        let pairs = solve_antipode_data(
            h.algebra(),
            h.delta_map(),
            h.counit_map(),
            h.phi(),
            h.antipode(),
        )
        .unwrap();
        assert!(pairs.iter().any(|(a, b)| a == &h.unit() && b == &h.unit()));
    }
}
