//! The `p`-Hecke correspondence on coarse moduli points in characteristic `p`.
//!
//! A point is a `j`-invariant over `K = F_{q^{dm}}` with the representative
//! `(g, Delta) = (1, 1/j)`, or `(0, 1)` when `j = 0`.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::ext::{ext_field, FieldExt, FieldMap};
use crate::arith::ff::Fe;
use crate::arith::matrix::{self, Matrix};
use crate::arith::place::PrimePlace;
use crate::arith::ring::{AAlgebra, Ring};
use crate::drinfeld::{hasse_invariant, quotient_by_kernel, DrinfeldModule, SubgroupScheme};
use crate::error::{Error, Result};
use crate::par::par_map;
use crate::skew::{stable_right_divisors, SkewPoly};

pub const STRUCTURE_LABEL: &str = "hecke-correspondence-structure";
pub const DECOMPOSITION_LABEL: &str = "stable-subgroup-decomposition";

#[derive(Clone, Debug)]
pub struct ModuliPoint {
    pub rep: DrinfeldModule<FieldExt>,
    pub j: Fe,
    pub ordinary: bool,
    pub hasse: Fe,
}

/// All coarse points over `K`, sorted by `j`.
#[derive(Clone, Debug)]
pub struct ModuliSpace {
    field: FieldExt,
    points: Vec<ModuliPoint>,
}

impl ModuliSpace {
    pub fn field(&self) -> &FieldExt {
        &self.field
    }

    pub fn place(&self) -> &PrimePlace {
        self.field.place()
    }

    pub fn points(&self) -> &[ModuliPoint] {
        &self.points
    }

    pub fn ordinary(&self) -> Vec<&ModuliPoint> {
        self.points.iter().filter(|p| p.ordinary).collect()
    }

    pub fn supersingular(&self) -> Vec<&ModuliPoint> {
        self.points.iter().filter(|p| !p.ordinary).collect()
    }

    pub fn index_of_j(&self, j: Fe) -> Option<usize> {
        self.points.binary_search_by(|p| p.j.cmp(&j)).ok()
    }

    /// `(1, 1/j)`, or `(0, 1)` at `j = 0`.
    pub fn representative(&self, j: Fe) -> Result<DrinfeldModule<FieldExt>> {
        let k = &self.field;
        match k.inv(&j) {
            Some(inv) => DrinfeldModule::new(k, Fe::ONE, inv),
            None => DrinfeldModule::new(k, Fe::ZERO, Fe::ONE),
        }
    }
}

/// Coarse moduli over `F_{q^{dm}}` with `T` acting through a root of `varpi`.
pub fn enumerate_moduli(place: &PrimePlace, m: usize) -> Result<ModuliSpace> {
    let field = ext_field(place, m, true)?;
    let js: Vec<Fe> = field.elements().collect();
    let space = ModuliSpace { field: field.clone(), points: Vec::new() };
    let points = par_map(&js, |&j| -> Result<ModuliPoint> {
        let rep = space.representative(j)?;
        let hasse = hasse_invariant(&rep)?;
        Ok(ModuliPoint { rep, j, ordinary: hasse != Fe::ZERO, hasse })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(ModuliSpace { field, points })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeKind {
    F,
    V,
}

#[derive(Clone, Debug)]
pub struct CorrEdge {
    pub src: usize,
    pub dst: usize,
    pub kind: EdgeKind,
    /// Monic kernel polynomial of degree `d`.
    pub u: SkewPoly<FieldExt>,
    pub lie: Fe,
    /// The quotient `rep(src) / ker u`, in the coordinate induced by `u`.
    pub target: DrinfeldModule<FieldExt>,
}

#[derive(Clone, Debug)]
pub struct Correspondence {
    pub space: ModuliSpace,
    /// Sorted by source, then kind.
    pub edges: Vec<CorrEdge>,
}

impl Correspondence {
    pub fn edges_from(&self, src: usize) -> impl Iterator<Item = (usize, &CorrEdge)> {
        self.edges.iter().enumerate().filter(move |(_, e)| e.src == src)
    }

    fn edge_of_kind(&self, src: usize, kind: EdgeKind) -> Option<&CorrEdge> {
        self.edges.iter().find(|e| e.src == src && e.kind == kind)
    }
}

/// The stable subgroups of order `q^d` of every point, as edges.
pub fn build_correspondence(space: &ModuliSpace) -> Result<Correspondence> {
    let k = space.field();
    let d = space.place().d();
    let per_point = par_map(space.points(), |pt| -> Result<Vec<CorrEdge>> {
        let e = &pt.rep;
        let phi_varpi = e.phi_eval(k.place().varpi());
        let divisors = stable_right_divisors(&e.phi_t(), &phi_varpi, d)?;
        let expected = if pt.ordinary { 2 } else { 1 };
        if divisors.len() != expected {
            return Err(Error::check(
                DECOMPOSITION_LABEL,
                format!("j = {} has {} stable subgroups of order q^d, expected {expected}", k.format(pt.j), divisors.len()),
            ));
        }
        let src = space.index_of_j(pt.j).expect("enumerated");
        let mut out = Vec::new();
        for u in divisors {
            let lie = u.coeff(0);
            let kind = if lie == Fe::ZERO { EdgeKind::F } else { EdgeKind::V };
            if kind == EdgeKind::F && u != SkewPoly::tau_pow(k, d) {
                return Err(Error::check(DECOMPOSITION_LABEL, format!("connected kernel {} is not tau^d", u.format())));
            }
            let h = SubgroupScheme::new(e, u.clone())?;
            let iso = quotient_by_kernel(e, &h)?;
            let j = iso.target.j_invariant();
            let dst = space
                .index_of_j(j)
                .ok_or_else(|| Error::check(STRUCTURE_LABEL, format!("quotient j = {} not enumerated", k.format(j))))?;
            out.push(CorrEdge { src, dst, kind, u, lie, target: iso.target });
        }
        out.sort_by_key(|e| e.kind);
        Ok(out)
    });
    let mut edges = Vec::new();
    for r in per_point {
        edges.extend(r?);
    }
    Ok(Correspondence { space: space.clone(), edges })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HeckeOp {
    F,
    U,
    T,
}

impl std::str::FromStr for HeckeOp {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "F" => Ok(HeckeOp::F),
            "U" => Ok(HeckeOp::U),
            "T" => Ok(HeckeOp::T),
            _ => Err(Error::Parse(format!("unknown operator '{s}' (expected F, U or T)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Locus {
    Ordinary,
    All,
}

/// An operator on weight-`k` functions, `(Mf)(P_i) = sum_j M[i][j] f(P_j)`.
#[derive(Clone, Debug)]
pub struct HeckeMatrix {
    pub k: i64,
    pub op: HeckeOp,
    pub locus: Locus,
    /// Field of the entries; an extension of `K` when `(q-1)` does not divide `k`.
    pub field: FieldExt,
    /// `j`-values of the rows and columns.
    pub index: Vec<Fe>,
    pub matrix: Matrix<Fe>,
    /// The formal power of `varpi` in front of `T`.
    pub normalization_exponent: i64,
    /// `F` is `q^d`-semilinear; its matrix here is the linear part over the prime field.
    pub semilinear: bool,
    /// Diamond operators are treated as the identity.
    pub coarse: bool,
}

#[derive(Serialize)]
struct HeckeMatrixJson {
    k: i64,
    op: HeckeOp,
    locus: Locus,
    field_size: u64,
    index: Vec<String>,
    rows: Vec<Vec<String>>,
    normalization_exponent: i64,
    semilinear: bool,
    coarse: bool,
}

impl HeckeMatrix {
    pub fn to_json(&self) -> serde_json::Value {
        let k = &self.field;
        let j = HeckeMatrixJson {
            k: self.k,
            op: self.op,
            locus: self.locus,
            field_size: k.size(),
            index: self.index.iter().map(|x| k.format(*x)).collect(),
            rows: self.matrix.to_rows().iter().map(|r| r.iter().map(|x| k.format(*x)).collect()).collect(),
            normalization_exponent: self.normalization_exponent,
            semilinear: self.semilinear,
            coarse: self.coarse,
        };
        serde_json::to_value(j).expect("serialisable")
    }

    /// Pairs `(row, col)` of nonzero entries.
    pub fn support(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.matrix.rows() {
            for j in 0..self.matrix.cols() {
                if *self.matrix.get(i, j) != Fe::ZERO {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn determinant(&self) -> Result<Fe> {
        matrix::det_field(&self.field, &self.matrix)
    }
}

/// The field carrying weight factors: `K` itself when `(q-1) | k`, else its degree-`(q-1)`
/// extension; the degree-`(q^2-1)` extension when an ordinary point sits at `j = 0` and
/// `(q^2-1)` does not divide `k`.
fn weight_field(k_field: &FieldExt, k: i64, ordinary_zero: bool) -> Result<(FieldExt, Option<FieldMap>)> {
    let q = k_field.q() as i64;
    let degree = if ordinary_zero && k.rem_euclid(q * q - 1) != 0 {
        q * q - 1
    } else if k.rem_euclid(q - 1) != 0 {
        q - 1
    } else {
        1
    };
    if degree == 1 {
        Ok((k_field.clone(), None))
    } else {
        let (l, map) = k_field.extend(degree as usize)?;
        Ok((l, Some(map)))
    }
}

const ROOT_SEARCH_LIMIT: u64 = 1 << 20;

/// The smallest `x` with `x^e = a`.
fn smallest_root(l: &FieldExt, a: Fe, e: u64) -> Result<Fe> {
    if l.size() > ROOT_SEARCH_LIMIT {
        return Err(Error::Precondition(format!("root search in a field of size {}", l.size())));
    }
    l.elements()
        .find(|x| l.pow(x, e) == a)
        .ok_or_else(|| Error::NoRoot(format!("{}-th root of {}", e, l.format(a))))
}

/// `c^k` with `sigma_c(rep) = target`: `c^{q-1} = g' / g` when `j != 0`, and
/// `c^{q^2-1} = Delta' / Delta` at `j = 0`.
fn rescaling_power(l: &FieldExt, embed: &dyn Fn(Fe) -> Fe, rep: &DrinfeldModule<FieldExt>, target: &DrinfeldModule<FieldExt>, k: i64) -> Result<Fe> {
    let kf = rep.ring();
    let q = kf.q() as i64;
    let (ratio, e) = if *rep.g() == Fe::ZERO {
        (kf.mul(target.delta(), &kf.inv(rep.delta()).expect("unit")), q * q - 1)
    } else {
        (kf.mul(target.g(), &kf.inv(rep.g()).expect("nonzero")), q - 1)
    };
    if k.rem_euclid(e) == 0 {
        return Ok(embed(kf.pow_signed(&ratio, k / e).expect("unit")));
    }
    let c = smallest_root(l, embed(ratio), e as u64)?;
    Ok(l.pow_signed(&c, k).expect("unit"))
}

/// The matrix of `F`, `U` or `T = F + U` in weight `k`.
pub fn operator_matrix(corr: &Correspondence, k: i64, op: HeckeOp, locus: Locus) -> Result<HeckeMatrix> {
    let space = &corr.space;
    let kf = space.field();
    let ordinary_zero = space.points().iter().any(|p| p.ordinary && p.j == Fe::ZERO);
    let (l, map) = weight_field(kf, k, ordinary_zero)?;
    let embed = |x: Fe| map.as_ref().map_or(x, |m| m.apply(x));
    let index: Vec<usize> =
        (0..space.points().len()).filter(|&i| locus == Locus::All || space.points()[i].ordinary).collect();
    let pos: HashMap<usize, usize> = index.iter().enumerate().map(|(a, &b)| (b, a)).collect();
    let mut m = matrix::zero(&l, index.len(), index.len());
    for e in &corr.edges {
        let (Some(&r), Some(&c)) = (pos.get(&e.src), pos.get(&e.dst)) else { continue };
        let w = match (e.kind, op) {
            (EdgeKind::F, HeckeOp::F | HeckeOp::T) => Fe::ONE,
            (EdgeKind::V, HeckeOp::U | HeckeOp::T) => {
                let lie = l.pow_signed(&embed(e.lie), k).expect("etale kernels have unit Lie coefficient");
                let rep = &space.points()[e.dst].rep;
                l.mul(&lie, &rescaling_power(&l, &embed, rep, &e.target, k)?)
            }
            _ => continue,
        };
        let v = l.add(m.get(r, c), &w);
        m.set(r, c, v);
    }
    Ok(HeckeMatrix {
        k,
        op,
        locus,
        field: l,
        index: index.iter().map(|&i| space.points()[i].j).collect(),
        matrix: m,
        normalization_exponent: -k.min(1),
        semilinear: op != HeckeOp::U,
        coarse: true,
    })
}

/// The involution pairing each edge with its dual edge.
pub fn atkin_lehner(corr: &Correspondence) -> Result<Vec<usize>> {
    let pts = corr.space.points();
    let mut w = Vec::with_capacity(corr.edges.len());
    for e in &corr.edges {
        let ordinary = pts[e.src].ordinary;
        let want = match (ordinary, e.kind) {
            (true, EdgeKind::F) => EdgeKind::V,
            (true, EdgeKind::V) => EdgeKind::F,
            (false, k) => k,
        };
        let dual = corr
            .edges
            .iter()
            .position(|f| f.src == e.dst && f.dst == e.src && f.kind == want)
            .ok_or_else(|| {
                Error::check(
                    STRUCTURE_LABEL,
                    format!("no dual edge for {:?} edge from j = {}", e.kind, corr.space.field().format(pts[e.src].j)),
                )
            })?;
        w.push(dual);
    }
    for (i, &x) in w.iter().enumerate() {
        if w[x] != i {
            return Err(Error::check(STRUCTURE_LABEL, "Atkin-Lehner is not an involution"));
        }
    }
    Ok(w)
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    pub q: u64,
    pub varpi: String,
    pub m: usize,
    pub ordinary: usize,
    pub supersingular: usize,
    pub edges: usize,
    pub failures: Vec<String>,
    pub passed: bool,
}

/// Checks the shape of the correspondence: edge counts, `F` as `j -> j^{q^d}`, `V` as its
/// inverse, disjoint supports, `V` after `F`, the Atkin-Lehner swap and `U^t = F` at `k = 0`.
pub fn structure_check(corr: &Correspondence) -> Result<StructureReport> {
    let space = &corr.space;
    let k = space.field();
    let d = space.place().d();
    let pts = space.points();
    let mut failures = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        let kinds: Vec<EdgeKind> = corr.edges_from(i).map(|(_, e)| e.kind).collect();
        let ok = if p.ordinary { kinds == [EdgeKind::F, EdgeKind::V] } else { kinds == [EdgeKind::F] };
        if !ok {
            failures.push(format!("j = {}: edge kinds {:?}", k.format(p.j), kinds));
        }
        if let Some(f) = corr.edge_of_kind(i, EdgeKind::F) {
            if pts[f.dst].j != k.frobenius_pow(p.j, d) {
                failures.push(format!("F-edge from j = {} does not raise j to q^d", k.format(p.j)));
            }
            if p.ordinary {
                match corr.edge_of_kind(f.dst, EdgeKind::V) {
                    Some(v) if v.dst == i => {}
                    _ => failures.push(format!("V after F does not return to j = {}", k.format(p.j))),
                }
            }
        }
        if let Some(v) = corr.edge_of_kind(i, EdgeKind::V) {
            if k.frobenius_pow(pts[v.dst].j, d) != p.j {
                failures.push(format!("V-edge from j = {} is not inverse to F", k.format(p.j)));
            }
        }
    }
    let f0 = operator_matrix(corr, 0, HeckeOp::F, Locus::Ordinary)?;
    let u0 = operator_matrix(corr, 0, HeckeOp::U, Locus::Ordinary)?;
    let f_part: Vec<usize> = (0..corr.edges.len()).filter(|&i| corr.edges[i].kind == EdgeKind::F).collect();
    let u_part: Vec<usize> = (0..corr.edges.len()).filter(|&i| corr.edges[i].kind == EdgeKind::V).collect();
    if f_part.iter().any(|i| u_part.contains(i)) || corr.edges.iter().any(|e| (e.lie == Fe::ZERO) != (e.kind == EdgeKind::F)) {
        failures.push("F- and U-supports overlap".into());
    }
    let keys: Vec<(usize, usize, EdgeKind)> = corr.edges.iter().map(|e| (e.src, e.dst, e.kind)).collect();
    for (i, a) in keys.iter().enumerate() {
        if keys[..i].contains(a) {
            failures.push(format!("duplicate edge {a:?}"));
        }
    }
    if u0.matrix.transpose() != f0.matrix {
        failures.push("transpose of U at weight 0 differs from F".into());
    }
    match atkin_lehner(corr) {
        Ok(w) => {
            for (i, &x) in w.iter().enumerate() {
                let e = &corr.edges[i];
                if pts[e.src].ordinary && corr.edges[x].kind == e.kind {
                    failures.push("Atkin-Lehner fixes a kind on the ordinary locus".into());
                }
            }
        }
        Err(e) => failures.push(e.to_string()),
    }
    Ok(StructureReport {
        q: space.place().q(),
        varpi: space.place().varpi_text(),
        m: k.m(),
        ordinary: space.ordinary().len(),
        supersingular: space.supersingular().len(),
        edges: corr.edges.len(),
        passed: failures.is_empty(),
        failures,
    })
}

/// Compares `j(E / H^can_n)` with `n` steps along `F`-edges, for every ordinary point.
pub fn canonical_iteration_check(corr: &Correspondence, n: usize) -> Result<bool> {
    let space = &corr.space;
    for (i, p) in space.points().iter().enumerate().filter(|(_, p)| p.ordinary) {
        let h = crate::drinfeld::canonical_subgroup(&p.rep, n)?;
        let j = quotient_by_kernel(&p.rep, &h)?.target.j_invariant();
        let mut at = i;
        for _ in 0..n {
            at = corr.edge_of_kind(at, EdgeKind::F).map(|e| e.dst).ok_or(Error::RingMismatch)?;
        }
        if space.points()[at].j != j {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The etale kernel of an ordinary module, and the quotient by it.
fn etale_quotient(e: &DrinfeldModule<FieldExt>) -> Result<(Fe, DrinfeldModule<FieldExt>)> {
    let k = e.ring();
    let divisors = stable_right_divisors(&e.phi_t(), &e.phi_eval(k.place().varpi()), k.place().d())?;
    let u = divisors
        .into_iter()
        .find(|u| u.coeff(0) != Fe::ZERO)
        .ok_or_else(|| Error::check(DECOMPOSITION_LABEL, "ordinary module without etale kernel"))?;
    let iso = quotient_by_kernel(e, &SubgroupScheme::new(e, u)?)?;
    Ok((iso.lie(), iso.target))
}

/// Draws a random weight-`k` function on all pairs `(g, Delta)` over `K`, applies `U`
/// through actual quotients, and checks the result is again of weight `k`.
pub fn weight_homogeneity_check(space: &ModuliSpace, k: i64, seed: u64) -> Result<bool> {
    let kf = space.field();
    let q = kf.q();
    let units: Vec<Fe> = kf.elements().skip(1).collect();
    let act = |c: &Fe, (g, dl): (Fe, Fe)| (kf.mul(&kf.pow(c, q - 1), &g), kf.mul(&kf.pow(c, q * q - 1), &dl));
    let ck = |c: &Fe| kf.pow_signed(c, k).expect("unit");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f: HashMap<(Fe, Fe), Fe> = HashMap::new();
    for g in kf.elements() {
        for &dl in &units {
            if f.contains_key(&(g, dl)) {
                continue;
            }
            let stabilised = units.iter().any(|c| act(c, (g, dl)) == (g, dl) && ck(c) != Fe::ONE);
            let v = if stabilised { Fe::ZERO } else { Fe(rng.gen_range(0..kf.size())) };
            for c in &units {
                f.insert(act(c, (g, dl)), kf.mul(&ck(c), &v));
            }
        }
    }
    let pairs: Vec<(Fe, Fe)> = kf.elements().flat_map(|g| units.iter().map(move |&dl| (g, dl))).collect();
    let uf: Vec<Result<((Fe, Fe), Fe)>> = par_map(&pairs, |&(g, dl)| {
        let e = DrinfeldModule::new(kf, g, dl)?;
        if hasse_invariant(&e)? == Fe::ZERO {
            return Ok(((g, dl), Fe::ZERO));
        }
        let (lie, target) = etale_quotient(&e)?;
        Ok(((g, dl), kf.mul(&kf.pow_signed(&lie, k).expect("unit"), &f[&(*target.g(), *target.delta())])))
    });
    let uf: HashMap<(Fe, Fe), Fe> = uf.into_iter().collect::<Result<_>>()?;
    for (&pt, &v) in &uf {
        for c in &units {
            if uf[&act(c, pt)] != kf.mul(&ck(c), &v) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub j: String,
    pub ordinary: bool,
    pub hasse: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub src: String,
    pub dst: String,
    pub kind: EdgeKind,
    pub u: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphRecord {
    pub nodes: Vec<NodeRecord>,
    pub edges: Vec<EdgeRecord>,
}

impl Correspondence {
    pub fn record(&self) -> GraphRecord {
        let k = self.space.field();
        let pts = self.space.points();
        GraphRecord {
            nodes: pts
                .iter()
                .map(|p| NodeRecord { j: k.format(p.j), ordinary: p.ordinary, hasse: k.format(p.hasse) })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeRecord {
                    src: k.format(pts[e.src].j),
                    dst: k.format(pts[e.dst].j),
                    kind: e.kind,
                    u: e.u.format(),
                })
                .collect(),
        }
    }
}

impl GraphRecord {
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph hecke {\n");
        for n in &self.nodes {
            let shape = if n.ordinary { "ellipse" } else { "box" };
            let _ = writeln!(s, "  \"{}\" [shape={shape}, label=\"j={}\\nhasse={}\"];", n.j, n.j, n.hasse);
        }
        for e in &self.edges {
            let style = if e.kind == EdgeKind::F { "solid" } else { "dashed" };
            let _ = writeln!(s, "  \"{}\" -> \"{}\" [style={style}, label=\"{:?}: {}\"];", e.src, e.dst, e.kind, e.u);
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::place::parse_place;

    fn corr(q: u64, v: &str, m: usize) -> Correspondence {
        build_correspondence(&enumerate_moduli(&parse_place(q, v).unwrap(), m).unwrap()).unwrap()
    }

    #[test]
    fn enumeration_examples() {
        let s = enumerate_moduli(&parse_place(3, "T").unwrap(), 1).unwrap();
        let ord: Vec<Fe> = s.ordinary().iter().map(|p| p.j).collect();
        let ss: Vec<Fe> = s.supersingular().iter().map(|p| p.j).collect();
        assert_eq!((ord, ss), (vec![Fe(1), Fe(2)], vec![Fe(0)]));
        let s = enumerate_moduli(&parse_place(3, "T").unwrap(), 2).unwrap();
        assert_eq!((s.ordinary().len(), s.supersingular().len()), (8, 1));
        let s = enumerate_moduli(&parse_place(2, "T^2+T+1").unwrap(), 1).unwrap();
        assert_eq!(s.supersingular().len(), 1);
    }

    #[test]
    fn edges_over_three_and_nine() {
        let c = corr(3, "T", 1);
        for e in c.edges.iter().filter(|e| e.kind == EdgeKind::F) {
            assert_eq!(e.src, e.dst);
        }
        let u = operator_matrix(&c, 0, HeckeOp::U, Locus::Ordinary).unwrap();
        assert_eq!(u.matrix, matrix::identity(&u.field, 2));
        let c9 = corr(3, "T", 2);
        let ord: Vec<usize> = (0..9).filter(|&i| c9.space.points()[i].ordinary).collect();
        let fixed = ord.iter().filter(|&&i| c9.edge_of_kind(i, EdgeKind::F).unwrap().dst == i).count();
        assert_eq!(fixed, 2);
        let rep = structure_check(&c9).unwrap();
        assert!(rep.passed, "{:?}", rep.failures);
        for k in [-2, 0, 2, 3, 5] {
            let u = operator_matrix(&c9, k, HeckeOp::U, Locus::Ordinary).unwrap();
            assert_ne!(u.determinant().unwrap(), Fe::ZERO);
            assert_eq!(u.normalization_exponent, -k.min(1));
        }
        assert!(canonical_iteration_check(&c9, 2).unwrap());
    }

    #[test]
    fn ordinary_point_at_j_zero() {
        let c = corr(2, "T^2+T+1", 2);
        let zero = c.space.index_of_j(Fe::ZERO).unwrap();
        assert!(c.space.points()[zero].ordinary);
        for k in [-2, 0, 2, 3, 5] {
            let u = operator_matrix(&c, k, HeckeOp::U, Locus::Ordinary).unwrap();
            assert_ne!(u.determinant().unwrap(), Fe::ZERO);
            let expected = if k % 3 == 0 { 16 } else { 4096 };
            assert_eq!(u.field.size(), expected, "k = {k}");
        }
    }

    #[test]
    fn atkin_lehner_swaps_kinds() {
        let c = corr(3, "T", 2);
        let w = atkin_lehner(&c).unwrap();
        for (i, &x) in w.iter().enumerate() {
            let (e, f) = (&c.edges[i], &c.edges[x]);
            assert_eq!((e.src, e.dst), (f.dst, f.src));
        }
    }

    #[test]
    fn weight_homogeneity_over_nine() {
        let s = enumerate_moduli(&parse_place(3, "T").unwrap(), 2).unwrap();
        for k in [-2, 0, 2, 3, 5] {
            assert!(weight_homogeneity_check(&s, k, 7).unwrap(), "k = {k}");
        }
    }

    #[test]
    fn graph_over_three() {
        let g = corr(3, "T", 1).record();
        assert_eq!(g.nodes.len(), 3);
        assert_eq!(g.nodes.iter().filter(|n| !n.ordinary).count(), 1);
        assert_eq!(g.edges.len(), 5);
        assert!(g.to_dot().starts_with("digraph"));
    }
}
