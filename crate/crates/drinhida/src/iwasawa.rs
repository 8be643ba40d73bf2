//! Truncations of the Iwasawa algebra `A_p[[A_p^x]]`.
//!
//! At level `m` an element is a tuple indexed by the tame characters
//! `chi_i(zeta) = zeta^i` of `mu_{q^d-1}`, each entry living in the wild group
//! algebra `(A/p^m)[(1+p)/(1+p^m)]`. A Dirac mass `delta_t` with `t = zeta u`
//! has entry `zeta^i delta_u` in component `i`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith::apoly::APoly;
use crate::arith::local::LocalRing;
use crate::arith::nt::factor;
use crate::arith::place::PrimePlace;
use crate::arith::ring::Ring;
use crate::error::{Error, Result};

/// Largest supported level.
pub const MAX_LEVEL: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IwasawaElement {
    comps: Vec<Vec<APoly>>,
}

impl IwasawaElement {
    /// `comps[i][w]` is the coefficient of the `w`-th wild element in component `i`.
    pub fn components(&self) -> &[Vec<APoly>] {
        &self.comps
    }
}

#[derive(Clone, Debug)]
pub struct IwasawaRing {
    inner: Arc<Inner>,
}

#[derive(Debug)]
struct Inner {
    local: LocalRing,
    /// Teichmuller lift of a generator of the residue field's unit group.
    zeta: APoly,
    wild: Vec<APoly>,
    wild_index: HashMap<APoly, usize>,
    mul_table: Vec<Vec<usize>>,
    inv_table: Vec<usize>,
    /// `p^e >= m`, the exponent of the wild group.
    wild_exponent: u64,
}

impl PartialEq for IwasawaRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.local == other.inner.local
    }
}

impl IwasawaRing {
    pub fn new(place: &PrimePlace, m: usize) -> Result<Self> {
        if m == 0 || m > MAX_LEVEL {
            return Err(Error::InvalidParameter(format!("level {m} outside 1..={MAX_LEVEL}")));
        }
        let local = LocalRing::new(place, m)?;
        let qd = place.residue_size();
        let residue = LocalRing::new(place, 1)?;
        let order = qd - 1;
        let primes: Vec<u64> = factor(order).into_iter().map(|(p, _)| p).collect();
        let gen = residue
            .elements()
            .into_iter()
            .find(|x| !x.is_zero() && primes.iter().all(|p| residue.pow(x, order / p) != residue.one()))
            .ok_or_else(|| Error::InvalidParameter("residue field has no generator".into()))?;
        let zeta = local.teichmuller(&gen);
        let a = place.a();
        let tail = LocalRing::new(place, m - 1).map(|r| r.elements()).unwrap_or_else(|_| vec![APoly::zero()]);
        let mut wild: Vec<APoly> =
            tail.iter().map(|s| local.reduce(&a.add(&APoly::one(), &a.mul(place.varpi(), s)))).collect();
        wild.sort();
        let wild_index: HashMap<APoly, usize> = wild.iter().cloned().enumerate().map(|(i, u)| (u, i)).collect();
        let mul_table: Vec<Vec<usize>> =
            wild.iter().map(|u| wild.iter().map(|v| wild_index[&local.mul(u, v)]).collect()).collect();
        let inv_table = wild.iter().map(|u| wild_index[&local.inv(u).expect("unit")]).collect();
        let p = place.a().fq().characteristic();
        let mut wild_exponent = 1;
        while wild_exponent < m as u64 {
            wild_exponent *= p;
        }
        Ok(IwasawaRing { inner: Arc::new(Inner { local, zeta, wild, wild_index, mul_table, inv_table, wild_exponent }) })
    }

    pub fn level(&self) -> usize {
        self.inner.local.precision()
    }

    pub fn coefficients(&self) -> &LocalRing {
        &self.inner.local
    }

    pub fn place(&self) -> &PrimePlace {
        self.inner.local.place()
    }

    /// Number of tame characters, `q^d - 1`.
    pub fn tame_count(&self) -> usize {
        (self.place().residue_size() - 1) as usize
    }

    /// `(1+p)/(1+p^m)` in sorted order.
    pub fn wild_elements(&self) -> &[APoly] {
        &self.inner.wild
    }

    pub fn zeta(&self) -> &APoly {
        &self.inner.zeta
    }

    pub fn wild_exponent(&self) -> u64 {
        self.inner.wild_exponent
    }

    fn zero_elem(&self) -> IwasawaElement {
        IwasawaElement { comps: vec![vec![APoly::zero(); self.inner.wild.len()]; self.tame_count()] }
    }

    /// The group-like `delta_t` of a unit `t`.
    pub fn dirac(&self, t: &APoly) -> Result<IwasawaElement> {
        let l = &self.inner.local;
        let t = l.reduce(t);
        if !l.is_unit(&t) {
            return Err(Error::InvalidParameter(format!("{} is not a unit", l.fmt_elem(&t))));
        }
        let zeta = l.teichmuller(&t);
        let u = l.mul(&t, &l.inv(&zeta).expect("unit"));
        let w = self.inner.wild_index[&u];
        let mut x = self.zero_elem();
        let mut zi = l.one();
        for comp in x.comps.iter_mut() {
            comp[w] = zi.clone();
            zi = l.mul(&zi, &zeta);
        }
        Ok(x)
    }

    /// `delta_{zeta^a}` for the fixed generator `zeta` of the tame part.
    pub fn tame_dirac(&self, a: u64) -> IwasawaElement {
        let t = self.inner.local.pow(&self.inner.zeta, a);
        self.dirac(&t).expect("unit")
    }

    /// A scalar `c delta_1`.
    pub fn scalar(&self, c: &APoly) -> IwasawaElement {
        let l = &self.inner.local;
        let w1 = self.inner.wild_index[&l.one()];
        let mut x = self.zero_elem();
        for comp in x.comps.iter_mut() {
            comp[w1] = l.reduce(c);
        }
        x
    }

    /// Supported only on component `i`.
    pub fn component_element(&self, i: usize, coeffs: Vec<APoly>) -> Result<IwasawaElement> {
        if i >= self.tame_count() || coeffs.len() != self.inner.wild.len() {
            return Err(Error::InvalidParameter("component index or length out of range".into()));
        }
        let mut x = self.zero_elem();
        x.comps[i] = coeffs.iter().map(|c| self.inner.local.reduce(c)).collect();
        Ok(x)
    }

    pub fn random<G: rand::Rng>(&self, rng: &mut G) -> IwasawaElement {
        let elems = self.inner.local.elements();
        let mut x = self.zero_elem();
        for comp in x.comps.iter_mut() {
            for c in comp.iter_mut() {
                *c = elems[rng.gen_range(0..elems.len())].clone();
            }
        }
        x
    }

    /// The image at a lower level.
    pub fn reduce_to(&self, x: &IwasawaElement, target: &IwasawaRing) -> Result<IwasawaElement> {
        if target.place() != self.place() || target.level() > self.level() {
            return Err(Error::RingMismatch);
        }
        let tl = &target.inner.local;
        let mut y = target.zero_elem();
        for (i, comp) in x.comps.iter().enumerate() {
            for (w, c) in comp.iter().enumerate() {
                let tw = target.inner.wild_index[&tl.reduce(&self.inner.wild[w])];
                y.comps[i][tw] = tl.add(&y.comps[i][tw], &tl.reduce(c));
            }
        }
        Ok(y)
    }

    fn component_mul(&self, a: &[APoly], b: &[APoly]) -> Vec<APoly> {
        let l = &self.inner.local;
        let mut out = vec![APoly::zero(); a.len()];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let k = self.inner.mul_table[i][j];
                out[k] = l.add(&out[k], &l.mul(x, y));
            }
        }
        out
    }

    /// `{level, tame: {chi_index: {group_elt: coeff}}}` with zero entries omitted.
    pub fn to_json(&self, x: &IwasawaElement) -> IwasawaJson {
        let a = self.place().a();
        let mut tame = BTreeMap::new();
        for (i, comp) in x.comps.iter().enumerate() {
            let entries: BTreeMap<String, String> = comp
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(w, c)| (a.format(&self.inner.wild[w]), a.format(c)))
                .collect();
            if !entries.is_empty() {
                tame.insert(i.to_string(), entries);
            }
        }
        IwasawaJson { level: self.level(), tame }
    }

    pub fn from_json(&self, j: &IwasawaJson) -> Result<IwasawaElement> {
        if j.level != self.level() {
            return Err(Error::InvalidParameter(format!("element level {} differs from ring level {}", j.level, self.level())));
        }
        let a = self.place().a();
        let l = &self.inner.local;
        let mut x = self.zero_elem();
        for (i, entries) in &j.tame {
            let i: usize = i.parse().map_err(|_| Error::Parse(format!("bad character index '{i}'")))?;
            if i >= self.tame_count() {
                return Err(Error::InvalidParameter(format!("character index {i} out of range")));
            }
            for (u, c) in entries {
                let u = l.reduce(&a.parse(u)?);
                let w = *self
                    .inner
                    .wild_index
                    .get(&u)
                    .ok_or_else(|| Error::InvalidParameter(format!("{} is not in 1 + varpi", a.format(&u))))?;
                x.comps[i][w] = l.add(&x.comps[i][w], &l.reduce(&a.parse(c)?));
            }
        }
        Ok(x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IwasawaJson {
    pub level: usize,
    pub tame: BTreeMap<String, BTreeMap<String, String>>,
}

impl Ring for IwasawaRing {
    type Elem = IwasawaElement;

    fn zero(&self) -> IwasawaElement {
        self.zero_elem()
    }

    fn one(&self) -> IwasawaElement {
        self.scalar(&APoly::one())
    }

    fn add(&self, a: &IwasawaElement, b: &IwasawaElement) -> IwasawaElement {
        let l = &self.inner.local;
        IwasawaElement {
            comps: a.comps.iter().zip(&b.comps).map(|(x, y)| x.iter().zip(y).map(|(s, t)| l.add(s, t)).collect()).collect(),
        }
    }

    fn neg(&self, a: &IwasawaElement) -> IwasawaElement {
        let l = &self.inner.local;
        IwasawaElement { comps: a.comps.iter().map(|x| x.iter().map(|s| l.neg(s)).collect()).collect() }
    }

    fn mul(&self, a: &IwasawaElement, b: &IwasawaElement) -> IwasawaElement {
        IwasawaElement { comps: a.comps.iter().zip(&b.comps).map(|(x, y)| self.component_mul(x, y)).collect() }
    }

    /// Units are the elements whose every component has unit augmentation.
    fn inv(&self, a: &IwasawaElement) -> Option<IwasawaElement> {
        let l = &self.inner.local;
        let mut y = self.zero_elem();
        let w1 = self.inner.wild_index[&l.one()];
        for (i, comp) in a.comps.iter().enumerate() {
            let aug = comp.iter().fold(APoly::zero(), |s, c| l.add(&s, c));
            y.comps[i][w1] = l.inv(&aug)?;
        }
        // Newton: y <- y (2 - a y), the defect lies in the nilpotent augmentation ideal
        let two = self.scalar(&l.from_int(2));
        for _ in 0..64 {
            let ay = self.mul(a, &y);
            if ay == self.one() {
                return Some(y);
            }
            y = self.mul(&y, &self.sub(&two, &ay));
        }
        None
    }

    fn frobenius(&self, a: &IwasawaElement) -> IwasawaElement {
        self.pow(a, self.place().q())
    }

    fn fmt_elem(&self, a: &IwasawaElement) -> String {
        let f = self.place().a();
        let parts: Vec<String> = a
            .comps
            .iter()
            .enumerate()
            .filter(|(_, c)| c.iter().any(|x| !x.is_zero()))
            .map(|(i, comp)| {
                let terms: Vec<String> = comp
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(w, c)| format!("({})[{}]", f.format(c), f.format(&self.inner.wild[w])))
                    .collect();
                format!("chi{i}: {}", terms.join(" + "))
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" | ")
        }
    }
}

/// A character of `A_p^x` at finite level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WeightChar {
    /// `t -> t^k`.
    Algebraic(i64),
    /// `zeta u -> zeta^tame u^wild`.
    General { tame: u64, wild: u64 },
}

/// `f_k`: the coefficient ring map sending `delta_t` to `t^k`.
pub fn specialize(ring: &IwasawaRing, x: &IwasawaElement, k: WeightChar) -> APoly {
    let l = ring.coefficients();
    let c = ring.tame_count() as i64;
    let (i, power): (usize, Box<dyn Fn(&APoly) -> APoly + '_>) = match k {
        WeightChar::Algebraic(k) => (k.rem_euclid(c) as usize, Box::new(move |u| l.pow_signed(u, k).expect("unit"))),
        WeightChar::General { tame, wild } => ((tame % c as u64) as usize, Box::new(move |u| l.pow(u, wild))),
    };
    x.comps[i]
        .iter()
        .zip(ring.wild_elements())
        .fold(APoly::zero(), |acc, (coef, u)| l.add(&acc, &l.mul(coef, &power(u))))
}

/// `iota(x)`, the function `s -> sum x(t) t^s`, tabulated over one period
/// `(q^d - 1) p^e` of the exponent.
#[derive(Clone, Debug)]
pub struct ContinuousFunction {
    values: Vec<APoly>,
}

impl ContinuousFunction {
    pub fn period(&self) -> usize {
        self.values.len()
    }

    pub fn at(&self, s: i64) -> &APoly {
        &self.values[s.rem_euclid(self.values.len() as i64) as usize]
    }
}

pub fn iota(ring: &IwasawaRing, x: &IwasawaElement) -> ContinuousFunction {
    let l = ring.coefficients();
    let c = ring.tame_count();
    let pe = ring.wild_exponent() as usize;
    // powers[w][t] = u_w^t by repeated multiplication
    let powers: Vec<Vec<APoly>> = ring
        .wild_elements()
        .iter()
        .map(|u| {
            let mut v = Vec::with_capacity(pe);
            let mut acc = l.one();
            for _ in 0..pe {
                v.push(acc.clone());
                acc = l.mul(&acc, u);
            }
            v
        })
        .collect();
    let period = c * pe;
    let values = (0..period)
        .map(|s| {
            x.comps[s % c]
                .iter()
                .zip(&powers)
                .fold(APoly::zero(), |acc, (coef, pw)| l.add(&acc, &l.mul(coef, &pw[s % pe])))
        })
        .collect();
    ContinuousFunction { values }
}

pub fn iota_eval(ring: &IwasawaRing, x: &IwasawaElement, k: i64) -> APoly {
    iota(ring, x).at(k).clone()
}

/// The automorphism induced by `t -> t^2 delta_{t^{-1}}`.
pub fn duality_twist(ring: &IwasawaRing, x: &IwasawaElement) -> IwasawaElement {
    let l = ring.coefficients();
    let c = ring.tame_count();
    let wild = ring.wild_elements();
    let mut y = ring.zero_elem();
    for i in 0..c {
        let src = (2 - i as i64).rem_euclid(c as i64) as usize;
        for (w, coef) in x.comps[src].iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            let u = &wild[w];
            let winv = ring.inner.inv_table[w];
            y.comps[i][winv] = l.add(&y.comps[i][winv], &l.mul(coef, &l.mul(u, u)));
        }
    }
    y
}

/// A finite set of weights whose evaluations span the same space as all weights.
#[derive(Clone, Debug, Serialize)]
pub struct DeterminingSet {
    pub level: usize,
    pub weights: Vec<i64>,
    /// Length of one period of the weight characters.
    pub period: usize,
    /// `log_{q^d}` of the size of the span of all evaluations.
    pub span_log: usize,
    /// `log_{q^d}` of the size of the whole truncated algebra.
    pub algebra_log: usize,
    /// Whether the chosen weights span what every weight spans.
    pub determines: bool,
    /// Whether evaluation separates elements; false above level 1.
    pub injective: bool,
}

fn evaluation_row(ring: &IwasawaRing, k: usize) -> Vec<APoly> {
    let l = ring.coefficients();
    let c = ring.tame_count();
    let nw = ring.wild_elements().len();
    let mut row = vec![APoly::zero(); c * nw];
    for (w, u) in ring.wild_elements().iter().enumerate() {
        row[(k % c) * nw + w] = l.pow(u, k as u64);
    }
    row
}

fn span_log(ring: &IwasawaRing, rows: &[Vec<APoly>]) -> usize {
    let m = ring.level();
    ring.coefficients().smith_valuations(rows).iter().map(|v| m - v).sum()
}

/// Greedily picks weights `0, 1, 2, ...` until their evaluation rows span what a full period spans.
pub fn determining_set(ring: &IwasawaRing) -> DeterminingSet {
    let period = ring.tame_count() * ring.wild_exponent() as usize;
    let all: Vec<Vec<APoly>> = (0..period).map(|k| evaluation_row(ring, k)).collect();
    let full = span_log(ring, &all);
    let mut chosen: Vec<Vec<APoly>> = Vec::new();
    let mut weights = Vec::new();
    let mut current = 0;
    for (k, row) in all.iter().enumerate() {
        if current == full {
            break;
        }
        chosen.push(row.clone());
        let s = span_log(ring, &chosen);
        if s > current {
            current = s;
            weights.push(k as i64);
        } else {
            chosen.pop();
        }
    }
    let algebra_log = ring.tame_count() * ring.wild_elements().len() * ring.level();
    DeterminingSet {
        level: ring.level(),
        weights,
        period,
        span_log: full,
        algebra_log,
        determines: current == full,
        injective: full == algebra_log,
    }
}

/// A monomial ideal in `varpi, T_1, ..., T_s`; exponent vectors have length `s + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialIdeal {
    pub vars: usize,
    pub generators: Vec<Vec<u32>>,
}

impl MonomialIdeal {
    fn new(vars: usize, mut gens: Vec<Vec<u32>>) -> Self {
        gens.sort();
        gens.dedup();
        let minimal: Vec<Vec<u32>> =
            gens.iter().filter(|g| !gens.iter().any(|h| h != *g && divides(h, g))).cloned().collect();
        MonomialIdeal { vars, generators: minimal }
    }

    pub fn contains(&self, mono: &[u32]) -> bool {
        self.generators.iter().any(|g| divides(g, mono))
    }

    pub fn contains_ideal(&self, other: &MonomialIdeal) -> bool {
        other.generators.iter().all(|g| self.contains(g))
    }

    /// Monomials in `self` but not in `smaller`; requires `smaller` to contain a power of every variable.
    pub fn quotient_basis(&self, smaller: &MonomialIdeal) -> Result<Vec<Vec<u32>>> {
        let mut bounds = Vec::with_capacity(self.vars);
        for v in 0..self.vars {
            let b = smaller
                .generators
                .iter()
                .filter(|g| g.iter().enumerate().all(|(i, e)| i == v || *e == 0))
                .map(|g| g[v])
                .min()
                .ok_or_else(|| Error::Precondition(format!("the smaller ideal contains no power of variable {v}")))?;
            bounds.push(b);
        }
        let mut out = Vec::new();
        let mut mono = vec![0u32; self.vars];
        loop {
            if self.contains(&mono) && !smaller.contains(&mono) {
                out.push(mono.clone());
            }
            let mut i = 0;
            loop {
                if i == self.vars {
                    out.sort_by(|a, b| degree(a).cmp(&degree(b)).then(b.cmp(a)));
                    return Ok(out);
                }
                mono[i] += 1;
                if mono[i] < bounds[i] {
                    break;
                }
                mono[i] = 0;
                i += 1;
            }
        }
    }

    pub fn format(&self) -> String {
        let gens: Vec<String> = self.generators.iter().map(|g| format_monomial(g)).collect();
        format!("({})", gens.join(", "))
    }
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn degree(a: &[u32]) -> u32 {
    a.iter().sum()
}

pub fn format_monomial(m: &[u32]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let v = if i == 0 { "varpi".to_string() } else { format!("T{i}") };
        parts.push(if e == 1 { v } else { format!("{v}^{e}") });
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// All monomials of total degree `deg` in the variables `0..=last`.
fn monomials_of_degree(vars: usize, last: usize, deg: u32) -> Vec<Vec<u32>> {
    fn rec(v: usize, last: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if v == last {
            cur[v] = left;
            out.push(cur.clone());
            cur[v] = 0;
            return;
        }
        for e in 0..=left {
            cur[v] = e;
            rec(v + 1, last, left - e, cur, out);
        }
        cur[v] = 0;
    }
    let mut out = Vec::new();
    rec(0, last, deg, &mut vec![0; vars], &mut out);
    out
}

fn var(vars: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; vars];
    v[i] = 1;
    v
}

/// `alpha(1) = 1`, `alpha(2) = 2`, `alpha(n + 1) = alpha(n) + n + 1`.
fn alpha(n: usize) -> usize {
    match n {
        0 => 0,
        1 => 1,
        _ => (3..=n).fold(2, |a, k| a + k),
    }
}

/// The largest index reachable with `s` wild generators.
pub fn max_index(s: usize) -> usize {
    alpha(s + 1)
}

/// `I_r` with `s` wild generators: `I_0 = I_1 = J_1` is the maximal ideal, `I_{alpha(n)} = J_n`
/// with `J_n = ((varpi, T_1..T_n)^n, T_{n+1}, ...)`, and for `1 <= j <= n + 1`,
/// `I_{alpha(n)+j} = ((varpi, T_1..T_n)^{n+1}, degree-j monomials divisible by T_{n+1}, T_{n+2}, ...)`.
/// Variables beyond `T_s` are set to zero.
pub fn filtration(s: usize, r: usize) -> Result<MonomialIdeal> {
    if s == 0 {
        return Err(Error::InvalidParameter("at least one wild generator is needed".into()));
    }
    if r > max_index(s) {
        return Err(Error::InvalidParameter(format!("index {r} exceeds {} for {s} generators", max_index(s))));
    }
    Ok(ideal_at(s, r))
}

fn ideal_at(s: usize, r: usize) -> MonomialIdeal {
    let vars = s + 1;
    if r <= 1 {
        return MonomialIdeal::new(vars, (0..vars).map(|i| var(vars, i)).collect());
    }
    let mut n = 2;
    while alpha(n + 1) <= r {
        n += 1;
    }
    let j = r - alpha(n);
    let tail = |from: usize| (from..vars).map(|i| var(vars, i)).collect::<Vec<_>>();
    if j == 0 {
        let mut gens = monomials_of_degree(vars, n.min(s), n as u32);
        gens.extend(tail(n + 1));
        return MonomialIdeal::new(vars, gens);
    }
    let mut gens = monomials_of_degree(vars, n.min(s), n as u32 + 1);
    if n < s {
        let t = n + 1;
        gens.extend(monomials_of_degree(vars, t, j as u32).into_iter().filter(|mono| mono[t] > 0));
        gens.extend(tail(n + 2));
    }
    MonomialIdeal::new(vars, gens)
}

#[derive(Clone, Debug, Serialize)]
pub struct FiltrationStep {
    pub r: usize,
    pub ideal: String,
    pub quotient_dim: usize,
    pub decreasing: bool,
    pub killed_by_maximal_ideal: bool,
}

/// `I_r / I_{r+1}`: its monomial basis size, and whether every variable kills it.
pub fn filtration_step(s: usize, r: usize) -> Result<FiltrationStep> {
    let big = filtration(s, r)?;
    let small = ideal_at(s, r + 1);
    let basis = big.quotient_basis(&small)?;
    let killed = basis.iter().all(|b| {
        (0..=s).all(|v| {
            let mut x = b.clone();
            x[v] += 1;
            small.contains(&x)
        })
    });
    Ok(FiltrationStep {
        r,
        ideal: big.format(),
        quotient_dim: basis.len(),
        decreasing: big.contains_ideal(&small),
        killed_by_maximal_ideal: killed,
    })
}

/// For each `k < s`, whether `T_{k+1}` lies outside `(T_1, ..., T_k)` with `s` generators:
/// the chain `(T_1) < (T_1, T_2) < ...` keeps growing as generators are added.
pub fn ascending_chain_witness(s: usize) -> Vec<bool> {
    let vars = s + 1;
    (0..s)
        .map(|k| {
            let ideal = MonomialIdeal::new(vars, (1..=k).map(|i| var(vars, i)).collect());
            !ideal.contains(&var(vars, k + 1))
        })
        .collect()
}
