//! Ordinary projectors `e(T) = lim T^{n!}` on towers of finite modules.

use serde::{Deserialize, Serialize};

use crate::arith::apoly::APoly;
use crate::arith::ext::FieldExt;
use crate::arith::local::LocalRing;
use crate::arith::matrix::{self, Matrix};
use crate::arith::place::parse_place;
use crate::arith::ring::Ring;
use crate::error::{Error, Result};
use crate::hecke::{operator_matrix, Correspondence, HeckeOp, Locus};
use crate::iwasawa::{specialize, IwasawaElement, IwasawaRing, WeightChar};

pub const PROJECTOR_LABEL: &str = "ordinary-projector";
pub const TOWER_LABEL: &str = "tower-compatibility";
pub const CONTROL_LABEL: &str = "projector-control";

/// Cap on factorial steps.
pub const MAX_STEPS: usize = 64;

/// Rings that can appear at the levels of a tower.
pub trait TowerRing: Ring {
    /// The image of `x`, an element of `from`, in `self`.
    fn reduce_from(&self, from: &Self, x: &Self::Elem) -> Result<Self::Elem>;

    /// All elements, when the ring is small enough to list.
    fn enumerate(&self) -> Option<Vec<Self::Elem>>;
}

impl TowerRing for LocalRing {
    fn reduce_from(&self, from: &Self, x: &APoly) -> Result<APoly> {
        if from.place() != self.place() || from.precision() < self.precision() {
            return Err(Error::RingMismatch);
        }
        Ok(self.reduce(x))
    }

    fn enumerate(&self) -> Option<Vec<APoly>> {
        (self.place().residue_size().checked_pow(self.precision() as u32)? <= 1 << 16).then(|| self.elements())
    }
}

impl TowerRing for FieldExt {
    fn reduce_from(&self, from: &Self, x: &crate::arith::ff::Fe) -> Result<crate::arith::ff::Fe> {
        if from != self {
            return Err(Error::RingMismatch);
        }
        Ok(*x)
    }

    fn enumerate(&self) -> Option<Vec<crate::arith::ff::Fe>> {
        (self.size() <= 1 << 16).then(|| self.elements().collect())
    }
}

impl TowerRing for IwasawaRing {
    fn reduce_from(&self, from: &Self, x: &IwasawaElement) -> Result<IwasawaElement> {
        from.reduce_to(x, self)
    }

    fn enumerate(&self) -> Option<Vec<IwasawaElement>> {
        None
    }
}

/// The idempotent and the number of factorial steps taken.
#[derive(Clone, Debug)]
pub struct Projector<E> {
    pub e: Matrix<E>,
    /// `e = T^{steps!}`.
    pub steps: usize,
    /// `T^{steps! - 1} e`, the inverse of `T` on the image of `e`.
    pub inverse_on_image: Matrix<E>,
}

/// Iterates `S_{n+1} = S_n^{n+1}` from `S_1 = T` until `S_n` is idempotent.
pub fn ordinary_projector<R: Ring>(ring: &R, t: &Matrix<R::Elem>) -> Result<Projector<R::Elem>> {
    if !t.is_square() {
        return Err(Error::InvalidParameter("operator matrix is not square".into()));
    }
    let n = t.rows();
    let id = matrix::identity(ring, n);
    // s = T^{k!}, p = T^{k! - 1}
    let mut s = t.clone();
    let mut p = id.clone();
    for k in 1..=MAX_STEPS {
        let sq = matrix::mul(ring, &s, &s)?;
        if sq == s {
            let inverse_on_image = matrix::mul(ring, &p, &s)?;
            return Ok(Projector { e: s, steps: k, inverse_on_image });
        }
        // T^{(k+1)! - 1} = (T^{k!})^k T^{k! - 1}
        p = matrix::mul(ring, &matrix::pow(ring, &s, k as u64)?, &p)?;
        s = matrix::pow(ring, &s, k as u64 + 1)?;
    }
    Err(Error::check(PROJECTOR_LABEL, format!("no idempotent after {MAX_STEPS} factorial steps")))
}

#[derive(Clone, Debug, Serialize)]
pub struct ProjectorCheck {
    pub steps: usize,
    pub idempotent: bool,
    pub commutes: bool,
    pub invertible_on_image: bool,
    pub vanishes_on_kernel: bool,
    pub power_independent: bool,
}

impl ProjectorCheck {
    pub fn passed(&self) -> bool {
        self.idempotent && self.commutes && self.invertible_on_image && self.vanishes_on_kernel && self.power_independent
    }
}

/// Asserts the defining properties of `e(T)`, and `e(T^r) = e(T)` for `r = 2, 3`.
pub fn check_projector<R: Ring>(ring: &R, t: &Matrix<R::Elem>) -> Result<(Projector<R::Elem>, ProjectorCheck)> {
    let proj = ordinary_projector(ring, t)?;
    let e = &proj.e;
    let n = t.rows();
    let id = matrix::identity(ring, n);
    let idempotent = matrix::mul(ring, e, e)? == *e;
    let commutes = matrix::mul(ring, e, t)? == matrix::mul(ring, t, e)?;
    let x = &proj.inverse_on_image;
    let invertible_on_image = matrix::mul(ring, t, x)? == *e && matrix::mul(ring, e, x)? == *x;
    // T^{steps!} (1 - e) = e (1 - e)
    let complement = matrix::sub(ring, &id, e)?;
    let vanishes_on_kernel = matrix::is_zero(ring, &matrix::mul(ring, e, &complement)?);
    let mut power_independent = true;
    for r in [2, 3] {
        let tr = matrix::pow(ring, t, r)?;
        power_independent &= ordinary_projector(ring, &tr)?.e == *e;
    }
    let check = ProjectorCheck {
        steps: proj.steps,
        idempotent,
        commutes,
        invertible_on_image,
        vanishes_on_kernel,
        power_independent,
    };
    Ok((proj, check))
}

/// One level: an endomorphism of `R_n^dim`.
#[derive(Clone, Debug)]
pub struct Level<R: Ring> {
    pub ring: R,
    pub op: Matrix<R::Elem>,
}

/// Levels `0..L` with transitions `M_{n+1} -> M_n`; `transitions[n]` is a `dim_n x dim_{n+1}` matrix over `R_n`.
#[derive(Clone, Debug)]
pub struct TowerOperator<R: TowerRing> {
    levels: Vec<Level<R>>,
    transitions: Vec<Matrix<R::Elem>>,
}

impl<R: TowerRing> TowerOperator<R> {
    /// Rejects towers whose operators do not commute with the transitions.
    pub fn new(levels: Vec<Level<R>>, transitions: Vec<Matrix<R::Elem>>) -> Result<Self> {
        if levels.is_empty() || transitions.len() + 1 != levels.len() {
            return Err(Error::InvalidParameter("a tower needs one transition between consecutive levels".into()));
        }
        let tower = TowerOperator { levels, transitions };
        for n in 0..tower.transitions.len() {
            let lo = &tower.levels[n];
            let p = &tower.transitions[n];
            if p.rows() != lo.op.rows() || p.cols() != tower.levels[n + 1].op.rows() {
                return Err(Error::InvalidParameter(format!("transition {n} has the wrong shape")));
            }
            let upper = tower.reduce_matrix(n, &tower.levels[n + 1].op)?;
            if matrix::mul(&lo.ring, p, &upper)? != matrix::mul(&lo.ring, &lo.op, p)? {
                return Err(Error::check(TOWER_LABEL, format!("the operator does not commute with transition {n}")));
            }
        }
        Ok(tower)
    }

    pub fn levels(&self) -> &[Level<R>] {
        &self.levels
    }

    pub fn transitions(&self) -> &[Matrix<R::Elem>] {
        &self.transitions
    }

    /// A matrix at level `n + 1` with entries reduced to `R_n`.
    fn reduce_matrix(&self, n: usize, m: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
        let lo = &self.levels[n].ring;
        let hi = &self.levels[n + 1].ring;
        let rows = m.to_rows().iter().map(|r| r.iter().map(|x| lo.reduce_from(hi, x)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(rows)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TowerReport {
    pub levels: Vec<ProjectorCheck>,
    pub compatible: bool,
    pub passed: bool,
}

/// Per-level projectors and their compatibility with transitions.
pub fn tower_projector<R: TowerRing>(tower: &TowerOperator<R>) -> Result<(Vec<Matrix<R::Elem>>, TowerReport)> {
    let mut es = Vec::new();
    let mut checks = Vec::new();
    for lvl in &tower.levels {
        let (p, c) = check_projector(&lvl.ring, &lvl.op)?;
        es.push(p.e);
        checks.push(c);
    }
    let mut compatible = true;
    for n in 0..tower.transitions.len() {
        let ring = &tower.levels[n].ring;
        let p = &tower.transitions[n];
        let upper = tower.reduce_matrix(n, &es[n + 1])?;
        compatible &= matrix::mul(ring, p, &upper)? == matrix::mul(ring, &es[n], p)?;
    }
    let passed = compatible && checks.iter().all(ProjectorCheck::passed);
    Ok((es, TowerReport { levels: checks, compatible, passed }))
}

#[derive(Clone, Debug, Serialize)]
pub struct FinitenessLevel {
    pub level: usize,
    /// `|M_n|`, then `|ker(M_n -> M_i)|` for `i = 0..=n`: a decreasing chain ending at 1.
    pub chain: Vec<u64>,
    pub stable: bool,
    pub exhaustive: bool,
}

/// Exhibits the kernels of the composite transitions at each level and checks they are `T`-stable.
pub fn local_finiteness_check<R: TowerRing>(tower: &TowerOperator<R>) -> Result<Vec<FinitenessLevel>> {
    let mut out = Vec::new();
    for n in 0..tower.levels.len() {
        let lvl = &tower.levels[n];
        let dim = lvl.op.rows();
        let Some(elems) = lvl.ring.enumerate() else {
            out.push(FinitenessLevel { level: n, chain: Vec::new(), stable: true, exhaustive: false });
            continue;
        };
        let total = (elems.len() as u64).checked_pow(dim as u32).filter(|t| *t <= 1 << 16);
        let Some(total) = total else {
            out.push(FinitenessLevel { level: n, chain: Vec::new(), stable: true, exhaustive: false });
            continue;
        };
        let vectors: Vec<Vec<R::Elem>> = (0..total)
            .map(|mut idx| {
                (0..dim)
                    .map(|_| {
                        let e = elems[(idx % elems.len() as u64) as usize].clone();
                        idx /= elems.len() as u64;
                        e
                    })
                    .collect()
            })
            .collect();
        let mut kernels = Vec::new();
        let mut stable = true;
        // images of each vector down the tower
        let mut images: Vec<Vec<R::Elem>> = vectors.clone();
        for i in (0..n).rev() {
            let lo = &tower.levels[i].ring;
            let hi = &tower.levels[i + 1].ring;
            images = images
                .iter()
                .map(|v| {
                    let red: Vec<R::Elem> = v.iter().map(|x| lo.reduce_from(hi, x)).collect::<Result<_>>()?;
                    matrix::apply(lo, &tower.transitions[i], &red)
                })
                .collect::<Result<_>>()?;
            let kernel: Vec<usize> = (0..images.len()).filter(|&k| images[k].iter().all(|x| lo.is_zero(x))).collect();
            for &k in &kernel {
                let tv = matrix::apply(&lvl.ring, &lvl.op, &vectors[k])?;
                let mut img = tv;
                for m in (i..n).rev() {
                    let lo_m = &tower.levels[m].ring;
                    let hi_m = &tower.levels[m + 1].ring;
                    let red: Vec<R::Elem> = img.iter().map(|x| lo_m.reduce_from(hi_m, x)).collect::<Result<_>>()?;
                    img = matrix::apply(lo_m, &tower.transitions[m], &red)?;
                }
                stable &= img.iter().all(|x| lo.is_zero(x));
            }
            kernels.push(kernel.len() as u64);
        }
        let mut chain = vec![total];
        chain.extend(kernels.iter().rev());
        chain.push(1);
        out.push(FinitenessLevel { level: n, chain, stable, exhaustive: true });
    }
    Ok(out)
}

/// `e` of the operator reduced modulo `varpi` against `e` of the top level reduced modulo `varpi`:
/// the restriction of `e` to `varpi^{n-1} M_n`.
pub fn exactness_check(tower: &TowerOperator<LocalRing>) -> Result<bool> {
    let top = tower.levels.last().expect("nonempty");
    let residue = LocalRing::new(top.ring.place(), 1)?;
    let reduce = |m: &Matrix<APoly>| m.map(|x| residue.reduce(x));
    let e_top = ordinary_projector(&top.ring, &top.op)?.e;
    let e_res = ordinary_projector(&residue, &reduce(&top.op))?.e;
    Ok(reduce(&e_top) == e_res)
}

/// The tower `T mod varpi^n`, `n = 1..=levels`, with identity transitions.
pub fn reduction_tower(top: &LocalRing, op: &Matrix<APoly>) -> Result<TowerOperator<LocalRing>> {
    let mut levels = Vec::new();
    for n in 1..=top.precision() {
        let ring = LocalRing::new(top.place(), n)?;
        let m = op.map(|x| ring.reduce(x));
        levels.push(Level { ring, op: m });
    }
    let transitions = levels.iter().take(levels.len() - 1).map(|l| matrix::identity(&l.ring, l.op.rows())).collect();
    TowerOperator::new(levels, transitions)
}

/// Two-level towers of Hecke operators at weight 0: functions on the points defined over
/// the bottom field, restricted from the points over the top field `K`.
pub fn hecke_tower(corr: &Correspondence, bottom_m: usize, op: HeckeOp, locus: Locus) -> Result<TowerOperator<FieldExt>> {
    let top = operator_matrix(corr, 0, op, locus)?;
    let k = corr.space.field();
    let top_m = k.m();
    if bottom_m == 0 || top_m % bottom_m != 0 {
        return Err(Error::InvalidParameter(format!("level {bottom_m} does not divide {top_m}")));
    }
    let f = k.field();
    let sub_degree = f.degree() / top_m as u32 * bottom_m as u32;
    let keep: Vec<usize> = (0..top.index.len()).filter(|&i| f.in_subfield(top.index[i], sub_degree)).collect();
    let bottom = Matrix::from_fn(keep.len(), keep.len(), |a, b| *top.matrix.get(keep[a], keep[b]));
    let restrict = Matrix::from_fn(keep.len(), top.index.len(), |a, b| if keep[a] == b { k.one() } else { k.zero() });
    TowerOperator::new(
        vec![Level { ring: k.clone(), op: bottom }, Level { ring: k.clone(), op: top.matrix }],
        vec![restrict],
    )
}

/// A random 4x4 operator over `A/varpi^levels` and its reduction tower.
pub fn random_tower<G: rand::Rng>(rng: &mut G, q: u64, varpi: &str, levels: usize) -> Result<TowerOperator<LocalRing>> {
    let place = parse_place(q, varpi)?;
    let ring = LocalRing::new(&place, levels)?;
    let elems = ring.elements();
    let op = Matrix::from_fn(4, 4, |_, _| elems[rng.gen_range(0..elems.len())].clone());
    reduction_tower(&ring, &op)
}

#[derive(Clone, Debug, Serialize)]
pub struct ControlReport {
    pub weight: WeightChar,
    /// Rank modulo the maximal ideal of `f_k(e(T))`.
    pub specialized_family_rank: usize,
    /// Rank modulo the maximal ideal of `e(f_k(T))`.
    pub specialized_operator_rank: usize,
    pub equal: bool,
    pub defect: Option<Vec<Vec<String>>>,
}

/// `f_k(e(T)) = e(f_k(T))` for an operator on a free module over the Iwasawa truncation.
pub fn control_check(ring: &IwasawaRing, t: &Matrix<IwasawaElement>, k: WeightChar) -> Result<ControlReport> {
    let l = ring.coefficients();
    let fam = ordinary_projector(ring, t)?.e;
    let lhs = fam.map(|x| specialize(ring, x, k));
    let tk = t.map(|x| specialize(ring, x, k));
    let rhs = ordinary_projector(l, &tk)?.e;
    let residue = LocalRing::new(l.place(), 1)?;
    let rank = |m: &Matrix<APoly>| matrix::rank_field(&residue, &m.map(|x| residue.reduce(x)));
    let equal = lhs == rhs;
    let a = l.place().a();
    let defect = (!equal).then(|| {
        matrix::sub(l, &lhs, &rhs).expect("same shape").to_rows().iter().map(|r| r.iter().map(|x| a.format(x)).collect()).collect()
    });
    Ok(ControlReport {
        weight: k,
        specialized_family_rank: rank(&lhs),
        specialized_operator_rank: rank(&rhs),
        equal,
        defect,
    })
}

/// The JSON form of a tower over truncations of `A_p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerFile {
    pub q: u64,
    pub varpi: String,
    pub levels: Vec<LevelFile>,
    /// `transitions[n]` maps level `n + 1` to level `n`.
    pub transitions: Vec<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelFile {
    pub ring: RingFile,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingFile {
    pub precision: usize,
}

impl TowerFile {
    pub fn build(&self) -> Result<TowerOperator<LocalRing>> {
        let place = parse_place(self.q, &self.varpi)?;
        let a = place.a();
        let parse_matrix = |ring: &LocalRing, rows: &[Vec<String>]| -> Result<Matrix<APoly>> {
            let rows = rows
                .iter()
                .map(|r| r.iter().map(|s| a.parse(s).map(|x| ring.reduce(&x))).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            Matrix::from_rows(rows)
        };
        let mut levels = Vec::new();
        for l in &self.levels {
            let ring = LocalRing::new(&place, l.ring.precision)?;
            let op = parse_matrix(&ring, &l.matrix)?;
            levels.push(Level { ring, op });
        }
        let transitions = self
            .transitions
            .iter()
            .enumerate()
            .map(|(n, t)| {
                let ring = &levels.get(n).ok_or_else(|| Error::InvalidParameter("too many transitions".into()))?.ring;
                parse_matrix(ring, t)
            })
            .collect::<Result<Vec<_>>>()?;
        TowerOperator::new(levels, transitions)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn two_by_two() -> (LocalRing, Matrix<APoly>) {
        let place = parse_place(3, "T").unwrap();
        let r = LocalRing::new(&place, 2).unwrap();
        let a = place.a();
        let m = Matrix::from_rows(vec![vec![APoly::one(), APoly::one()], vec![APoly::zero(), a.parse("T").unwrap()]]).unwrap();
        (r, m)
    }

    #[test]
    fn worked_example() {
        let (r, t) = two_by_two();
        let (p, c) = check_projector(&r, &t).unwrap();
        let a = r.place().a();
        let expected =
            Matrix::from_rows(vec![vec![APoly::one(), a.parse("1+T").unwrap()], vec![APoly::zero(), APoly::zero()]]).unwrap();
        assert_eq!(p.e, expected);
        assert!(c.passed());
    }

    #[test]
    fn trivial_examples() {
        let (r, _) = two_by_two();
        let id = matrix::identity(&r, 3);
        assert_eq!(ordinary_projector(&r, &id).unwrap().e, id);
        let nil = Matrix::from_fn(3, 3, |i, j| if j == i + 1 { APoly::one() } else { APoly::zero() });
        assert!(matrix::is_zero(&r, &ordinary_projector(&r, &nil).unwrap().e));
    }

    #[test]
    fn non_commuting_tower_is_rejected() {
        let (r, t) = two_by_two();
        let r1 = LocalRing::new(r.place(), 1).unwrap();
        let bad = Level { ring: r1.clone(), op: matrix::identity(&r1, 2) };
        let swap = Matrix::from_rows(vec![vec![APoly::zero(), APoly::one()], vec![APoly::one(), APoly::zero()]]).unwrap();
        let res = TowerOperator::new(vec![bad, Level { ring: r, op: t }], vec![swap]);
        assert!(matches!(res, Err(Error::CheckFailed { .. })));
    }

    #[test]
    fn reduction_towers() {
        let (r, t) = two_by_two();
        let tower = reduction_tower(&r, &t).unwrap();
        let (_, rep) = tower_projector(&tower).unwrap();
        assert!(rep.passed);
        assert!(exactness_check(&tower).unwrap());
        let fin = local_finiteness_check(&tower).unwrap();
        assert_eq!(fin[1].chain, vec![81, 9, 1]);
        assert!(fin.iter().all(|l| l.stable));
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let t = random_tower(&mut rng, 3, "T", 3).unwrap();
            assert!(tower_projector(&t).unwrap().1.passed);
        }
    }

    #[test]
    fn control_examples() {
        let place = parse_place(3, "T").unwrap();
        let ring = IwasawaRing::new(&place, 2).unwrap();
        let a = place.a();
        let u = ring.dirac(&a.parse("1+T").unwrap()).unwrap();
        let t = Matrix::from_rows(vec![vec![u]]).unwrap();
        let rep = control_check(&ring, &t, WeightChar::Algebraic(2)).unwrap();
        assert!(rep.equal);
        assert_eq!((rep.specialized_family_rank, rep.specialized_operator_rank), (1, 1));
        let s = |x: &str| ring.scalar(&a.parse(x).unwrap());
        let t = Matrix::from_rows(vec![vec![s("1"), s("1")], vec![s("0"), s("T")]]).unwrap();
        let rep = control_check(&ring, &t, WeightChar::Algebraic(3)).unwrap();
        assert!(rep.equal && rep.specialized_family_rank == 1);
        let t = Matrix::from_rows(vec![vec![s("T"), s("1")], vec![s("0"), s("0")]]).unwrap();
        let rep = control_check(&ring, &t, WeightChar::Algebraic(0)).unwrap();
        assert!(rep.equal && rep.specialized_family_rank == 0);
    }

    #[test]
    fn tower_file_round_trip() {
        let f = TowerFile {
            q: 3,
            varpi: "T".into(),
            levels: vec![
                LevelFile { ring: RingFile { precision: 1 }, matrix: vec![vec!["1".into(), "1".into()], vec!["0".into(), "0".into()]] },
                LevelFile { ring: RingFile { precision: 2 }, matrix: vec![vec!["1".into(), "1".into()], vec!["0".into(), "T".into()]] },
            ],
            transitions: vec![vec![vec!["1".into(), "0".into()], vec!["0".into(), "1".into()]]],
        };
        let text = serde_json::to_string(&f).unwrap();
        let back: TowerFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
        assert!(tower_projector(&back.build().unwrap()).unwrap().1.passed);
    }
}
