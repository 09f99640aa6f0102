//! Sector classification, bidegree placement, and the assembled bigraded
//! state space.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::chiral::{jacobi_quotient_slice, restricted_potential, SectorSlice};
use crate::polycore::{build_superpotential, ModelData, Monomial, Poly, PolyError, VarTable};
use crate::symmetry::{relevant_elements, FixedData, GroupElement, SymmetryError, SymmetryGroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StateError {
    #[error("element {0} has non-integral age")]
    FractionalAge(String),
    #[error("generator of {element} placed at ({p},{q}), outside 0..={dim}")]
    PlacementOutOfRange {
        element: String,
        p: i64,
        q: i64,
        dim: i64,
    },
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SectorKind {
    Jacobi,
    Projective,
}

/// What a basis element of a sector is: `t^k·dt` or a Jacobi class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    Projective { k: u32 },
    Jacobi { k: u32, monomial: Monomial },
}

/// `ω|γ⟩`: a generator together with its sector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateLabel {
    pub element: GroupElement,
    /// Combined indices of the coordinates in the volume form.
    pub form: Vec<usize>,
    pub generator: Generator,
}

impl StateLabel {
    pub fn render(&self, vars: &VarTable) -> String {
        format!("{}|{}>", self.generator_text(vars), self.element)
    }

    pub fn generator_text(&self, vars: &VarTable) -> String {
        match &self.generator {
            Generator::Projective { k: 0 } => "dt".to_string(),
            Generator::Projective { k: 1 } => "t*dt".to_string(),
            Generator::Projective { k } => format!("t^{k}*dt"),
            Generator::Jacobi { monomial, .. } => {
                let form: String = self
                    .form_order()
                    .iter()
                    .map(|&j| format!("d{}", vars.name(j)))
                    .collect();
                if form.is_empty() {
                    monomial.display(vars).to_string()
                } else {
                    format!("{form} {}", monomial.display(vars))
                }
            }
        }
    }

    /// p-coordinates first, as in `dp dx`.
    fn form_order(&self) -> Vec<usize> {
        let n = self.element.n();
        let mut f: Vec<usize> = self.form.iter().copied().filter(|&j| j >= n).collect();
        f.extend(self.form.iter().copied().filter(|&j| j < n));
        f
    }

    pub fn monomial(&self) -> Option<&Monomial> {
        match &self.generator {
            Generator::Jacobi { monomial, .. } => Some(monomial),
            Generator::Projective { .. } => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub p: i64,
    pub q: i64,
    pub label: StateLabel,
}

#[derive(Clone, Debug)]
pub struct SectorContribution {
    pub fd: FixedData,
    pub kind: SectorKind,
    pub entries: Vec<Entry>,
    /// Graded pieces used for a Jacobi sector, by p-degree.
    pub slices: Vec<SectorSlice>,
}

fn integral_age(fd: &FixedData) -> Result<i64, StateError> {
    fd.age_integer()
        .ok_or_else(|| StateError::FractionalAge(fd.element.label()))
}

/// Range of p-degrees whose placement lands inside `0..=dim`.
pub fn jacobi_k_range(
    model: &ModelData,
    fd: &FixedData,
) -> Result<std::ops::RangeInclusive<i64>, StateError> {
    let dim = model.dim();
    let (dg, s) = jacobi_shape(model, fd)?;
    let lo = 0.max(-s).max(dg + s - dim);
    let hi = (dg + s).min(dim - s);
    Ok(lo..=hi)
}

/// `(D_γ, s)` with `D_γ = n_γ - r_γ - 1` and `s = a_γ - r + r_γ`.
fn jacobi_shape(model: &ModelData, fd: &FixedData) -> Result<(i64, i64), StateError> {
    let a = integral_age(fd)?;
    let dg = fd.n_gamma as i64 - fd.r_gamma as i64 - 1;
    let s = a - model.r() as i64 + fd.r_gamma as i64;
    Ok((dg, s))
}

pub fn sector_contribution(
    model: &ModelData,
    wbar: &Poly,
    fd: &FixedData,
    group: &SymmetryGroup,
) -> Result<SectorContribution, StateError> {
    let dim = model.dim();
    let a = integral_age(fd)?;
    let form = fd.fixed_coords();
    let check = |p: i64, q: i64| -> Result<(), StateError> {
        if (0..=dim).contains(&p) && (0..=dim).contains(&q) {
            Ok(())
        } else {
            Err(StateError::PlacementOutOfRange {
                element: fd.element.label(),
                p,
                q,
                dim,
            })
        }
    };
    if fd.r_gamma >= fd.n_gamma {
        let mut entries = Vec::new();
        for k in 0..(fd.r_gamma - fd.n_gamma) as i64 {
            let pq = a - model.r() as i64 + fd.n_gamma as i64 + k;
            check(pq, pq)?;
            entries.push(Entry {
                p: pq,
                q: pq,
                label: StateLabel {
                    element: fd.element.clone(),
                    form: form.clone(),
                    generator: Generator::Projective { k: k as u32 },
                },
            });
        }
        return Ok(SectorContribution {
            fd: fd.clone(),
            kind: SectorKind::Projective,
            entries,
            slices: Vec::new(),
        });
    }
    let (dg, s) = jacobi_shape(model, fd)?;
    let v = restricted_potential(wbar, fd);
    let mut entries = Vec::new();
    let mut slices = Vec::new();
    for k in jacobi_k_range(model, fd)? {
        let slice = jacobi_quotient_slice(model, &v, fd, k as u32, group);
        let (p, q) = (dg - k + s, k + s);
        if slice.dimension > 0 {
            check(p, q)?;
        }
        for m in &slice.quotient_basis {
            entries.push(Entry {
                p,
                q,
                label: StateLabel {
                    element: fd.element.clone(),
                    form: form.clone(),
                    generator: Generator::Jacobi {
                        k: k as u32,
                        monomial: m.clone(),
                    },
                },
            });
        }
        slices.push(slice);
    }
    Ok(SectorContribution {
        fd: fd.clone(),
        kind: SectorKind::Jacobi,
        entries,
        slices,
    })
}

/// The assembled bigraded state space.
#[derive(Clone, Debug)]
pub struct StateSpace {
    pub model: String,
    pub group: String,
    pub dim: i64,
    pub vars: VarTable,
    pub sectors: Vec<SectorContribution>,
}

impl StateSpace {
    pub fn hodge(&self, p: i64, q: i64) -> usize {
        self.sectors
            .iter()
            .flat_map(|s| &s.entries)
            .filter(|e| e.p == p && e.q == q)
            .count()
    }

    /// `grid[p][q] = h^{p,q}`.
    pub fn hodge_grid(&self) -> Vec<Vec<usize>> {
        let d = self.dim.max(0);
        (0..=d)
            .map(|p| (0..=d).map(|q| self.hodge(p, q)).collect())
            .collect()
    }

    pub fn total_dimension(&self) -> usize {
        self.sectors.iter().map(|s| s.entries.len()).sum()
    }

    /// Labels placed at `(p, q)`, in sector order.
    pub fn labels_at(&self, p: i64, q: i64) -> Vec<&StateLabel> {
        self.sectors
            .iter()
            .flat_map(|s| &s.entries)
            .filter(|e| e.p == p && e.q == q)
            .map(|e| &e.label)
            .collect()
    }

    /// Per-bidegree count of contributions grouped by sector shape
    /// `(r_γ, n_γ, age)`.
    pub fn breakdown(&self, p: i64, q: i64) -> BTreeMap<(usize, usize, i64), usize> {
        let mut out = BTreeMap::new();
        for s in &self.sectors {
            let c = s.entries.iter().filter(|e| e.p == p && e.q == q).count();
            if c > 0 {
                let a = s.fd.age_integer().unwrap_or(-1);
                *out.entry((s.fd.r_gamma, s.fd.n_gamma, a)).or_insert(0) += c;
            }
        }
        out
    }

    pub fn slice_for(&self, element: &GroupElement, k: u32) -> Option<&SectorSlice> {
        self.sectors
            .iter()
            .find(|s| &s.fd.element == element)
            .and_then(|s| s.slices.iter().find(|sl| sl.k == k))
    }
}

pub fn assemble(model: &ModelData, group: &SymmetryGroup) -> Result<StateSpace, StateError> {
    let wbar = build_superpotential(model)?;
    let rel = relevant_elements(group)?;
    let sectors: Result<Vec<SectorContribution>, StateError> = rel
        .par_iter()
        .map(|fd| sector_contribution(model, &wbar, fd, group))
        .collect();
    let sectors: Vec<SectorContribution> = sectors?
        .into_iter()
        .filter(|s| !s.entries.is_empty())
        .collect();
    Ok(StateSpace {
        model: model.name.clone(),
        group: group.name.clone(),
        dim: model.dim(),
        vars: model.vars.clone(),
        sectors,
    })
}

/// Diamond layout: row `p+q`, entries by decreasing p.
pub fn hodge_diamond_text(grid: &[Vec<usize>]) -> String {
    let d = grid.len() as i64 - 1;
    if d < 0 {
        return String::new();
    }
    let rows: Vec<Vec<String>> = (0..=2 * d)
        .map(|s| {
            (0.max(s - d)..=s.min(d))
                .rev()
                .map(|p| grid[p as usize][(s - p) as usize].to_string())
                .collect()
        })
        .collect();
    let cell = rows
        .iter()
        .flatten()
        .map(|c| c.len())
        .max()
        .unwrap_or(1)
        .max(1);
    let width = (2 * d as usize + 1) * (cell + 1);
    let mut out = String::new();
    for row in &rows {
        let line = row
            .iter()
            .map(|c| format!("{c:^cell$}"))
            .collect::<Vec<_>>()
            .join(&" ".repeat(cell + 2));
        let pad = width.saturating_sub(line.len()) / 2;
        let _ = writeln!(out, "{}{}", " ".repeat(pad), line.trim_end());
    }
    out
}

#[derive(Serialize)]
struct JsonEntry {
    p: i64,
    q: i64,
    label: String,
}

#[derive(Serialize)]
struct JsonSector {
    gamma: Vec<String>,
    n_gamma: usize,
    r_gamma: usize,
    age: String,
    kind: SectorKind,
    entries: Vec<JsonEntry>,
}

#[derive(Serialize)]
struct JsonStateSpace {
    model: String,
    group: String,
    hodge: Vec<Vec<usize>>,
    sectors: Vec<JsonSector>,
}

pub fn to_json(s: &StateSpace) -> serde_json::Value {
    let doc = JsonStateSpace {
        model: s.model.clone(),
        group: s.group.clone(),
        hodge: s.hodge_grid(),
        sectors: s
            .sectors
            .iter()
            .map(|sec| JsonSector {
                gamma: sec
                    .fd
                    .element
                    .phases()
                    .iter()
                    .map(|q| q.to_string())
                    .collect(),
                n_gamma: sec.fd.n_gamma,
                r_gamma: sec.fd.r_gamma,
                age: sec.fd.age.to_string(),
                kind: sec.kind,
                entries: sec
                    .entries
                    .iter()
                    .map(|e| JsonEntry {
                        p: e.p,
                        q: e.q,
                        label: e.label.render(&s.vars),
                    })
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_value(doc).expect("state space serializes")
}

pub fn to_text(s: &StateSpace) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "model {}  group {}  D = {}", s.model, s.group, s.dim);
    out.push_str(&hodge_diamond_text(&s.hodge_grid()));
    let _ = writeln!(out);
    for sec in &s.sectors {
        let _ = writeln!(
            out,
            "{}  n={} r={} age={} {:?} ({} generators)",
            sec.fd.element,
            sec.fd.n_gamma,
            sec.fd.r_gamma,
            sec.fd.age,
            sec.kind,
            sec.entries.len()
        );
        for e in &sec.entries {
            let _ = writeln!(out, "    ({},{})  {}", e.p, e.q, e.label.render(&s.vars));
        }
    }
    out
}

/// Phase vector `(a,b;c)/9` as `\frac19(a,b;c)`.
pub fn latex_element(g: &GroupElement) -> String {
    let den = g.denominator();
    let nums = g.numerators(&den);
    let n = g.n();
    let join = |v: &[num_bigint::BigInt]| {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    let body = format!("({};{})", join(&nums[..n]), join(&nums[n..]));
    if den == num_bigint::BigInt::from(1) {
        body
    } else {
        format!("\\frac1{{{den}}}{body}")
    }
}

/// LaTeX name of a coordinate: `x1` becomes `x_1`.
pub fn latex_var(name: &str) -> String {
    match name.find(|c: char| c.is_ascii_digit()) {
        Some(i) if i > 0 => format!("{}_{{{}}}", &name[..i], &name[i..]),
        _ => name.to_string(),
    }
}

pub fn latex_monomial(m: &Monomial, vars: &VarTable) -> String {
    let n = m.x.len();
    let mut out = String::new();
    for j in (n..m.nvars()).chain(0..n) {
        let e = m.exp(j);
        if e == 0 {
            continue;
        }
        out.push_str(&latex_var(vars.name(j)));
        if e > 1 {
            let _ = write!(out, "^{e}");
        }
    }
    if out.is_empty() {
        out.push('1');
    }
    out
}

pub fn latex_label(l: &StateLabel, vars: &VarTable) -> String {
    let gen = match &l.generator {
        Generator::Projective { k: 0 } => "dt".to_string(),
        Generator::Projective { k: 1 } => "t\\,dt".to_string(),
        Generator::Projective { k } => format!("t^{k}dt"),
        Generator::Jacobi { monomial, .. } => latex_monomial(monomial, vars),
    };
    format!("{gen}|{}\\rangle", latex_element(&l.element))
}

pub fn to_latex(s: &StateSpace) -> String {
    let mut out = String::new();
    let grid = s.hodge_grid();
    let _ = writeln!(
        out,
        "\\begin{{tabular}}{{ c{} }}",
        " c".repeat(grid.len().saturating_sub(1))
    );
    let _ = writeln!(out, "\\toprule");
    for (p, row) in grid.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|h| h.to_string()).collect();
        let _ = writeln!(out, "% p = {p}\n{} \\\\", cells.join(" & "));
    }
    let _ = writeln!(out, "\\bottomrule\n\\end{{tabular}}\n");
    let _ = writeln!(out, "\\begin{{tabular}}{{ c c c }}\n\\toprule\n$(p,q)$ & generator & $a_\\gamma$ \\\\\n\\midrule");
    for sec in &s.sectors {
        for e in &sec.entries {
            let _ = writeln!(
                out,
                "$({},{})$ & ${}$ & {} \\\\",
                e.p,
                e.q,
                latex_label(&e.label, &s.vars),
                sec.fd.age
            );
        }
    }
    let _ = writeln!(out, "\\bottomrule\n\\end{{tabular}}");
    out
}

impl fmt::Display for SectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SectorKind::Jacobi => f.write_str("Jacobi"),
            SectorKind::Projective => f.write_str("Projective"),
        }
    }
}
