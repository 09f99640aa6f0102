//! Graded pieces of the chiral algebra of a sector: invariant monomials of a
//! fixed p-degree and their quotient by the Jacobi ideal of the restricted
//! superpotential.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{
    frac_mod_one, lcm_all, reduce_mod_prime, ArithError, ModpEchelon, RatMatrix, Rational,
    SparseEchelon,
};
use crate::polycore::{ModelData, Monomial, Poly};
use crate::symmetry::{FixedData, GroupElement, SymmetryGroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChiralError {
    #[error("monomial is not in the slice")]
    NotInSlice,
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Substitutes 0 for every coordinate moved by the element.
pub fn restricted_potential(wbar: &Poly, fd: &FixedData) -> Poly {
    wbar.restrict(&fd.fixed_mask())
}

/// Torus weight of the volume form on the fixed coordinates.
pub fn form_weight(model: &ModelData, fd: &FixedData) -> i64 {
    let tw = model.torus_weights();
    fd.fixed_coords().iter().map(|&j| tw[j]).sum()
}

/// Character of the fixed-coordinate volume form under `g`.
pub fn form_character(g: &GroupElement, fd: &FixedData) -> Rational {
    frac_mod_one(
        &fd.fixed_coords()
            .iter()
            .map(|&j| g.phase(j).clone())
            .sum::<Rational>(),
    )
}

pub fn monomial_character(m: &Monomial, g: &GroupElement) -> Rational {
    frac_mod_one(
        &m.exps()
            .zip(g.phases())
            .filter(|(e, _)| *e > 0)
            .map(|(e, a)| a * Rational::from_integer(BigInt::from(e)))
            .sum::<Rational>(),
    )
}

/// Monomials in the coordinates `xs` (x-indices) and `ps` (p-indices) with
/// total p-degree `k` and torus weight `target`, in increasing order.
pub fn monomials_with(
    model: &ModelData,
    xs: &[usize],
    ps: &[usize],
    k: u32,
    target: i64,
) -> Vec<Monomial> {
    let (n, r) = (model.n(), model.r());
    let mut out = Vec::new();
    let mut pexp = vec![0u32; ps.len()];
    let mut xexp = vec![0u32; xs.len()];
    let mut p_choices = Vec::new();
    compositions(ps.len(), k, &mut pexp, 0, &mut |e| {
        p_choices.push(e.to_vec())
    });
    for pe in p_choices {
        let pw: i64 = pe
            .iter()
            .zip(ps)
            .map(|(&e, &i)| e as i64 * model.degrees[i] as i64)
            .sum();
        let need = target + pw;
        if need < 0 {
            continue;
        }
        let ws: Vec<u64> = xs.iter().map(|&j| model.weights[j]).collect();
        weighted(&ws, need as u64, &mut xexp, 0, &mut |xe| {
            let mut m = Monomial::one(n, r);
            for (&e, &j) in xe.iter().zip(xs) {
                m.x[j] = e;
            }
            for (&e, &i) in pe.iter().zip(ps) {
                m.p[i] = e;
            }
            out.push(m);
        });
    }
    out.sort();
    out
}

fn compositions(len: usize, total: u32, buf: &mut Vec<u32>, pos: usize, f: &mut dyn FnMut(&[u32])) {
    if len == 0 {
        if total == 0 {
            f(buf);
        }
        return;
    }
    if pos == len - 1 {
        buf[pos] = total;
        f(buf);
        return;
    }
    for e in 0..=total {
        buf[pos] = e;
        compositions(len, total - e, buf, pos + 1, f);
    }
    buf[pos] = 0;
}

fn weighted(ws: &[u64], total: u64, buf: &mut Vec<u32>, pos: usize, f: &mut dyn FnMut(&[u32])) {
    if pos == ws.len() {
        if total == 0 {
            f(buf);
        }
        return;
    }
    let w = ws[pos];
    for e in 0..=(total / w) {
        buf[pos] = e as u32;
        weighted(ws, total - e * w, buf, pos + 1, f);
    }
    buf[pos] = 0;
}

/// Whether `m` is invariant once tensored with the fixed volume form: its
/// character cancels the form's under every generator.
fn is_invariant(m: &Monomial, gens: &[(GroupElement, Rational)]) -> bool {
    gens.iter()
        .all(|(g, fc)| frac_mod_one(&(monomial_character(m, g) + fc)).is_zero())
}

fn generator_characters(fd: &FixedData, group: &SymmetryGroup) -> Vec<(GroupElement, Rational)> {
    group
        .generators
        .iter()
        .map(|g| (g.clone(), form_character(g, fd)))
        .collect()
}

/// Invariant monomials on the fixed coordinates with p-degree `k`.
pub fn slice_monomials(
    model: &ModelData,
    fd: &FixedData,
    k: u32,
    group: &SymmetryGroup,
) -> Vec<Monomial> {
    let target = -form_weight(model, fd);
    let gens = generator_characters(fd, group);
    monomials_with(model, &fd.fixed_x, &fd.fixed_p, k, target)
        .into_iter()
        .filter(|m| is_invariant(m, &gens))
        .collect()
}

/// One graded piece `(Q_V)^Γ` of a sector, with its quotient basis.
#[derive(Clone, Debug)]
pub struct SectorSlice {
    pub sector_element: GroupElement,
    pub k: u32,
    /// Slice monomials in increasing order.
    pub monomials: Vec<Monomial>,
    pub ideal_rank: usize,
    /// Standard monomials, in increasing order.
    pub quotient_basis: Vec<Monomial>,
    pub dimension: usize,
    column: HashMap<Monomial, usize>,
    rows: Vec<Vec<(usize, BigInt)>>,
    echelon: SparseEchelon,
}

impl SectorSlice {
    /// Columns run from the highest monomial to the lowest, so pivots are
    /// leading monomials and the non-pivots are the lowest representatives.
    fn col(&self, m: &Monomial) -> Option<usize> {
        self.column.get(m).copied()
    }

    fn monomial_at(&self, col: usize) -> &Monomial {
        &self.monomials[self.monomials.len() - 1 - col]
    }

    /// Ideal spanning vectors `m'·∂V/∂z_j` as integer rows over the columns.
    pub fn ideal_rows(&self) -> &[Vec<(usize, BigInt)>] {
        &self.rows
    }

    /// The ideal spanning set as a dense matrix whose columns follow
    /// `monomials` (increasing order).
    pub fn ideal_matrix(&self) -> RatMatrix {
        let ncols = self.monomials.len();
        let mut m = RatMatrix::zeros(self.rows.len(), ncols);
        for (i, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                m[(i, ncols - 1 - c)] = Rational::from_integer(v.clone());
            }
        }
        m
    }

    /// Expresses a combination of slice monomials in the quotient basis.
    pub fn normal_form(
        &self,
        terms: &[(Monomial, Rational)],
    ) -> Result<Vec<(Monomial, Rational)>, ChiralError> {
        let mut v = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            v.push((self.col(m).ok_or(ChiralError::NotInSlice)?, c.clone()));
        }
        let mut acc: HashMap<usize, Rational> = HashMap::new();
        for (c, q) in v {
            *acc.entry(c).or_insert_with(Rational::zero) += q;
        }
        let v: Vec<(usize, Rational)> = acc.into_iter().filter(|(_, q)| !q.is_zero()).collect();
        let mut v = v;
        v.sort_by_key(|(c, _)| *c);
        let red = self.echelon.reduce(v);
        let mut out: Vec<(Monomial, Rational)> = red
            .into_iter()
            .map(|(c, q)| (self.monomial_at(c).clone(), q))
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(out)
    }

    /// Coordinates of a monomial's class in `quotient_basis`.
    pub fn coordinates(&self, m: &Monomial) -> Result<Vec<Rational>, ChiralError> {
        let nf = self.normal_form(&[(m.clone(), Rational::one())])?;
        let mut out = vec![Rational::zero(); self.dimension];
        for (bm, q) in nf {
            let i = self
                .quotient_basis
                .binary_search(&bm)
                .expect("normal forms are supported on the quotient basis");
            out[i] = q;
        }
        Ok(out)
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.column.contains_key(m)
    }

    /// Dimension recomputed with coefficients reduced modulo the prime `p`.
    pub fn dimension_mod_prime(&self, p: u64) -> Result<usize, ArithError> {
        let mut e = ModpEchelon::new(p);
        let pb = BigInt::from(p);
        for row in &self.rows {
            let r: Vec<(usize, u64)> = row
                .iter()
                .map(|(c, v)| {
                    let m = v.mod_floor(&pb);
                    (*c, num_traits::ToPrimitive::to_u64(&m).unwrap_or(0))
                })
                .collect();
            e.insert(r);
        }
        Ok(self.monomials.len() - e.rank())
    }

    /// True when every ideal row has a single character under each of `gens`.
    pub fn rows_character_homogeneous(&self, gens: &[GroupElement]) -> bool {
        self.rows.iter().all(|row| {
            gens.iter().all(|g| {
                let mut chars = row
                    .iter()
                    .map(|(c, _)| monomial_character(self.monomial_at(*c), g));
                match chars.next() {
                    None => true,
                    Some(first) => chars.all(|ch| ch == first),
                }
            })
        })
    }
}

/// Quotient of the slice by `m'·∂V/∂z_j` over fixed coordinates `z_j`.
///
/// `v` must already be restricted to the sector's coordinates.
pub fn jacobi_quotient_slice(
    model: &ModelData,
    v: &Poly,
    fd: &FixedData,
    k: u32,
    group: &SymmetryGroup,
) -> SectorSlice {
    let monomials = slice_monomials(model, fd, k, group);
    let len = monomials.len();
    let column: HashMap<Monomial, usize> = monomials
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), len - 1 - i))
        .collect();
    let target = -form_weight(model, fd);
    let tw = model.torus_weights();
    let mut rows: Vec<Vec<(usize, BigInt)>> = Vec::new();
    let mut echelon = SparseEchelon::new();
    if len > 0 {
        for j in fd.fixed_coords() {
            let d = v.partial(j);
            let Some((lead, _)) = d.terms().next() else {
                continue;
            };
            let dk = lead.p_degree();
            if dk > k {
                continue;
            }
            let cof_target = target + tw[j];
            for cof in monomials_with(model, &fd.fixed_x, &fd.fixed_p, k - dk, cof_target) {
                let prod = d.mul_monomial(&cof);
                let first = prod.terms().next().map(|(m, _)| m.clone());
                let Some(first) = first else { continue };
                if !column.contains_key(&first) {
                    // a different character block
                    continue;
                }
                let den = lcm_all(prod.terms().map(|(_, c)| c.denom()));
                let mut row: Vec<(usize, BigInt)> = prod
                    .terms()
                    .map(|(m, c)| {
                        let col = column[m];
                        (col, c.numer() * (&den / c.denom()))
                    })
                    .collect();
                row.sort_by_key(|(c, _)| *c);
                echelon.insert(row.clone());
                rows.push(row);
            }
        }
    }
    let ideal_rank = echelon.rank();
    let quotient_basis: Vec<Monomial> = monomials
        .iter()
        .filter(|m| !echelon.is_pivot(column[*m]))
        .cloned()
        .collect();
    SectorSlice {
        sector_element: fd.element.clone(),
        k,
        dimension: len - ideal_rank,
        monomials,
        ideal_rank,
        quotient_basis,
        column,
        rows,
        echelon,
    }
}

/// Every slice monomial whose class is a nonzero multiple of the class of
/// `m` (or zero along with it).
pub fn class_synonyms(m: &Monomial, slice: &SectorSlice) -> Result<Vec<Monomial>, ChiralError> {
    let base = slice.coordinates(m)?;
    let mut out = Vec::new();
    for other in &slice.monomials {
        let c = slice.coordinates(other)?;
        if proportional(&base, &c) {
            out.push(other.clone());
        }
    }
    Ok(out)
}

fn proportional(a: &[Rational], b: &[Rational]) -> bool {
    let a_zero = a.iter().all(|q| q.is_zero());
    let b_zero = b.iter().all(|q| q.is_zero());
    if a_zero || b_zero {
        return a_zero && b_zero;
    }
    let Some(i) = a.iter().position(|q| !q.is_zero()) else {
        return false;
    };
    if b[i].is_zero() {
        return false;
    }
    let f = &b[i] / &a[i];
    a.iter().zip(b).all(|(x, y)| &(x * &f) == y)
}

/// Dimension of the slice computed over GF(p) from scratch, independent of
/// the exact elimination.
pub fn slice_dimension_mod_prime(
    model: &ModelData,
    v: &Poly,
    fd: &FixedData,
    k: u32,
    group: &SymmetryGroup,
    p: u64,
) -> Result<usize, ArithError> {
    let monomials = slice_monomials(model, fd, k, group);
    let column: HashMap<&Monomial, usize> =
        monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let target = -form_weight(model, fd);
    let tw = model.torus_weights();
    let mut e = ModpEchelon::new(p);
    for j in fd.fixed_coords() {
        let d = v.partial(j);
        let Some((lead, _)) = d.terms().next() else {
            continue;
        };
        let dk = lead.p_degree();
        if dk > k {
            continue;
        }
        for cof in monomials_with(model, &fd.fixed_x, &fd.fixed_p, k - dk, target + tw[j]) {
            let mut row = Vec::new();
            for (m, c) in d.terms() {
                let mm = m.mul(&cof);
                if let Some(&col) = column.get(&mm) {
                    row.push((col, reduce_mod_prime(c, p)?));
                }
            }
            e.insert(row);
        }
    }
    Ok(monomials.len() - e.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::polycore::{build_superpotential, parse_polynomial, GroupSelector, VarTable};
    use crate::symmetry::{extend_to_p, j_group, maximal_group, sl_subgroup};

    fn lt() -> ModelData {
        let v = VarTable::with_default_p(
            ["x1", "x2", "x3", "X1", "X2", "X3"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            2,
        );
        let xo = v.x_only();
        let w1 = parse_polynomial("x1^3 + x2^3 + x3^3 - 3*X1*X2*X3", &xo).unwrap();
        let w2 = parse_polynomial("X1^3 + X2^3 + X3^3 - 3*x1*x2*x3", &xo).unwrap();
        ModelData::new("lt", v, vec![1; 6], vec![w1, w2], None, GroupSelector::J).unwrap()
    }

    fn mono(m: &ModelData, s: &str) -> Monomial {
        parse_polynomial(s, &m.vars)
            .unwrap()
            .terms()
            .next()
            .unwrap()
            .0
            .clone()
    }

    #[test]
    fn restriction() {
        let m = lt();
        let wbar = build_superpotential(&m).unwrap();
        let g = extend_to_p(&[0, 0, 0, 3, 3, 3].map(|a| rat(a, 9)), &m).unwrap();
        let fd = FixedData::of(g);
        let v = restricted_potential(&wbar, &fd);
        assert_eq!(
            v,
            parse_polynomial("p1*x1^3 + p1*x2^3 + p1*x3^3 - 3*p2*x1*x2*x3", &m.vars).unwrap()
        );
        let id = FixedData::of(GroupElement::identity(6, 2));
        assert_eq!(restricted_potential(&wbar, &id), wbar);
    }

    #[test]
    fn gamma_identity_slices() {
        let m = lt();
        let g = j_group(&m).unwrap();
        let wbar = build_superpotential(&m).unwrap();
        let id = FixedData::of(GroupElement::identity(6, 2));
        assert_eq!(slice_monomials(&m, &id, 1, &g).len(), 112);
        let s0 = jacobi_quotient_slice(&m, &wbar, &id, 0, &g);
        assert_eq!(s0.dimension, 1);
        assert_eq!(s0.quotient_basis, vec![Monomial::one(6, 2)]);
        let s1 = jacobi_quotient_slice(&m, &wbar, &id, 1, &g);
        assert_eq!(s1.dimension, 73);
        assert_eq!(s1.dimension_mod_prime(10007).unwrap(), 73);
        assert_eq!(
            slice_dimension_mod_prime(&m, &wbar, &id, 1, &g, 10009).unwrap(),
            73
        );
        let syn = class_synonyms(&mono(&m, "p1*X1*X2*X3"), &s1).unwrap();
        let want: Vec<Monomial> = [
            "p1*X1*X2*X3",
            "p2*x1*x2*x3",
            "p2*X1^3",
            "p2*X2^3",
            "p2*X3^3",
            "p1*x1^3",
            "p1*x2^3",
            "p1*x3^3",
        ]
        .iter()
        .map(|s| mono(&m, s))
        .collect();
        let mut want = want;
        want.sort();
        assert_eq!(syn, want);
        assert_eq!(
            class_synonyms(&mono(&m, "p1*x1*x2*X3"), &s1).unwrap(),
            vec![mono(&m, "p1*x1*x2*X3")]
        );
    }

    #[test]
    fn twisted_two_dimensional_sector() {
        let m = lt();
        let gmax = maximal_group(&m).unwrap();
        let sl = sl_subgroup(&gmax, &m).unwrap();
        let wbar = build_superpotential(&m).unwrap();
        let g = extend_to_p(&[0, 0, 0, 3, 3, 3].map(|a| rat(a, 9)), &m).unwrap();
        let fd = FixedData::of(g);
        let v = restricted_potential(&wbar, &fd);
        let s = jacobi_quotient_slice(&m, &v, &fd, 0, &sl);
        assert_eq!(s.dimension, 2);
        assert_eq!(s.quotient_basis, vec![mono(&m, "x1^3"), mono(&m, "x2^3")]);
        assert!(s.rows_character_homogeneous(&sl.generators));
        assert_eq!(
            class_synonyms(&mono(&m, "x1^3"), &s).unwrap(),
            vec![mono(&m, "x1^3")]
        );
    }
}
