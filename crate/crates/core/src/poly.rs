//! Sparse multivariate polynomials with Gaussian-rational coefficients.
//!
//! Exponent vectors are dense per registry and packed one byte per variable
//! into a `u128` (variable 0 in the most significant byte), so the packed
//! integer order is lexicographic order on exponent vectors. Terms live in a
//! `BTreeMap` keyed by graded-lex order; zero coefficients are never stored.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::registry::{VarRegistry, MAX_VARS};
use crate::scalar::{
    conj, fmt_gauss, gone, gzero, is_gzero, parse_gauss, real, to_c64, GaussRational,
    ParseRationalError, Rational,
};

/// Largest total degree any polynomial may reach.
pub const DEGREE_CAP: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomials live over different variable registries")]
    RegistryMismatch,
    #[error("point has {got} coordinates, registry has {expected} variables")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("no substitute given for variable {0}")]
    MissingSubstitute(String),
    #[error("total degree {degree} exceeds the cap of {cap}")]
    DegreeOverflow { degree: u32, cap: u32 },
    #[error("unknown variable or coordinate {0}")]
    UnknownVariable(String),
    #[error("duplicate variable name {0}")]
    DuplicateVariable(String),
    #[error("registry has {vars} variables, at most {max} are supported")]
    RegistryTooLarge { vars: usize, max: usize },
    #[error("cannot parse polynomial text: {0}")]
    Parse(String),
}

impl From<ParseRationalError> for PolyError {
    fn from(e: ParseRationalError) -> Self {
        PolyError::Parse(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial(u128);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    fn shift(var: usize) -> u32 {
        ((MAX_VARS - 1 - var) * 8) as u32
    }

    pub fn from_exponents(exps: &[u32]) -> Result<Self, PolyError> {
        if exps.len() > MAX_VARS {
            return Err(PolyError::RegistryTooLarge {
                vars: exps.len(),
                max: MAX_VARS,
            });
        }
        let degree: u32 = exps.iter().sum();
        if degree > DEGREE_CAP {
            return Err(PolyError::DegreeOverflow {
                degree,
                cap: DEGREE_CAP,
            });
        }
        let mut packed = 0u128;
        for (i, &e) in exps.iter().enumerate() {
            packed |= (e as u128) << Self::shift(i);
        }
        Ok(Monomial(packed))
    }

    pub fn var(idx: usize) -> Self {
        Monomial(1u128 << Self::shift(idx))
    }

    pub fn exponent(self, var: usize) -> u32 {
        ((self.0 >> Self::shift(var)) & 0xff) as u32
    }

    pub fn exponents(self, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|i| self.exponent(i)).collect()
    }

    pub fn degree(self) -> u32 {
        self.0.to_be_bytes().iter().map(|&b| b as u32).sum()
    }

    /// Product; the caller guarantees the degree cap (so no byte overflows).
    fn mul_unchecked(self, other: Monomial) -> Monomial {
        Monomial(self.0 + other.0)
    }

    pub fn checked_mul(self, other: Monomial) -> Result<Monomial, PolyError> {
        let degree = self.degree() + other.degree();
        if degree > DEGREE_CAP {
            return Err(PolyError::DegreeOverflow {
                degree,
                cap: DEGREE_CAP,
            });
        }
        Ok(self.mul_unchecked(other))
    }

    /// Lowers the exponent of `var` by one; `None` if it is zero.
    fn lower(self, var: usize) -> Option<Monomial> {
        if self.exponent(var) == 0 {
            None
        } else {
            Some(Monomial(self.0 - (1u128 << Self::shift(var))))
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone)]
pub struct SparsePoly {
    reg: Arc<VarRegistry>,
    terms: BTreeMap<Monomial, GaussRational>,
}

pub(crate) fn same_registry(a: &Arc<VarRegistry>, b: &Arc<VarRegistry>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn add_into(terms: &mut BTreeMap<Monomial, GaussRational>, m: Monomial, c: GaussRational) {
    if is_gzero(&c) {
        return;
    }
    match terms.entry(m) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let sum = o.get() + c;
            if is_gzero(&sum) {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

impl SparsePoly {
    pub fn zero(reg: &Arc<VarRegistry>) -> Self {
        SparsePoly {
            reg: reg.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(reg: &Arc<VarRegistry>, c: GaussRational) -> Self {
        let mut p = Self::zero(reg);
        add_into(&mut p.terms, Monomial::ONE, c);
        p
    }

    pub fn from_rational(reg: &Arc<VarRegistry>, c: Rational) -> Self {
        Self::constant(reg, real(c))
    }

    pub fn one(reg: &Arc<VarRegistry>) -> Self {
        Self::constant(reg, gone())
    }

    pub fn var(reg: &Arc<VarRegistry>, idx: usize) -> Self {
        assert!(idx < reg.len(), "variable index out of range");
        let mut p = Self::zero(reg);
        p.terms.insert(Monomial::var(idx), gone());
        p
    }

    pub fn var_named(reg: &Arc<VarRegistry>, name: &str) -> Result<Self, PolyError> {
        Ok(Self::var(reg, reg.try_index_of(name)?))
    }

    /// `re + i·im` for the named complex coordinate.
    pub fn complex_coord(reg: &Arc<VarRegistry>, name: &str) -> Result<Self, PolyError> {
        let c = reg.try_coord(name)?;
        let mut p = Self::var(reg, c.re);
        p.terms.insert(Monomial::var(c.im), crate::scalar::imag_unit());
        Ok(p)
    }

    /// `re − i·im` for the named complex coordinate.
    pub fn complex_coord_conj(reg: &Arc<VarRegistry>, name: &str) -> Result<Self, PolyError> {
        Ok(Self::complex_coord(reg, name)?.conj())
    }

    pub fn monomial(
        reg: &Arc<VarRegistry>,
        exps: &[u32],
        c: GaussRational,
    ) -> Result<Self, PolyError> {
        if exps.len() != reg.len() {
            return Err(PolyError::DimensionMismatch {
                expected: reg.len(),
                got: exps.len(),
            });
        }
        let mut p = Self::zero(reg);
        add_into(&mut p.terms, Monomial::from_exponents(exps)?, c);
        Ok(p)
    }

    pub fn from_terms<I>(reg: &Arc<VarRegistry>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, GaussRational)>,
    {
        let mut p = Self::zero(reg);
        for (m, c) in terms {
            add_into(&mut p.terms, m, c);
        }
        p
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.reg
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GaussRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> GaussRational {
        self.terms.get(m).cloned().unwrap_or_else(gzero)
    }

    /// Coefficient of the monomial with the given exponent vector.
    pub fn coeff_of(&self, exps: &[u32]) -> GaussRational {
        Monomial::from_exponents(exps)
            .map(|m| self.coeff(&m))
            .unwrap_or_else(|_| gzero())
    }

    pub fn constant_term(&self) -> GaussRational {
        self.coeff(&Monomial::ONE)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).min()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exponent(var)).max().unwrap_or(0)
    }

    /// True when every coefficient is real, i.e. the polynomial is
    /// real-valued at real points.
    pub fn is_real_valued(&self) -> bool {
        self.terms.values().all(|c| c.im.is_zero())
    }

    /// Same terms over a registry with identical length.
    pub fn relabel(&self, reg: &Arc<VarRegistry>) -> Result<Self, PolyError> {
        if reg.len() != self.reg.len() {
            return Err(PolyError::RegistryMismatch);
        }
        Ok(SparsePoly {
            reg: reg.clone(),
            terms: self.terms.clone(),
        })
    }

    fn check_same(&self, other: &Self) -> Result<(), PolyError> {
        if same_registry(&self.reg, &other.reg) {
            Ok(())
        } else {
            Err(PolyError::RegistryMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            add_into(&mut out.terms, *m, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            add_into(&mut out.terms, *m, -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same(other)?;
        if let (Some(a), Some(b)) = (self.degree(), other.degree()) {
            if a + b > DEGREE_CAP {
                return Err(PolyError::DegreeOverflow {
                    degree: a + b,
                    cap: DEGREE_CAP,
                });
            }
        }
        let mut acc: std::collections::HashMap<Monomial, GaussRational> =
            std::collections::HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul_unchecked(*mb);
                let c = mul_gauss(ca, cb);
                match acc.entry(m) {
                    std::collections::hash_map::Entry::Vacant(v) => {
                        v.insert(c);
                    }
                    std::collections::hash_map::Entry::Occupied(mut o) => {
                        *o.get_mut() += c;
                    }
                }
            }
        }
        Ok(SparsePoly {
            reg: self.reg.clone(),
            terms: acc.into_iter().filter(|(_, c)| !is_gzero(c)).collect(),
        })
    }

    pub fn checked_pow(&self, mut n: u32) -> Result<Self, PolyError> {
        let mut result = Self::one(&self.reg);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = result.checked_mul(&base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(result)
    }

    pub fn pow(&self, n: u32) -> Self {
        self.checked_pow(n).expect("polynomial power")
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        if is_gzero(c) {
            return Self::zero(&self.reg);
        }
        SparsePoly {
            reg: self.reg.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (*m, mul_gauss(a, c)))
                .collect(),
        }
    }

    pub fn scale_rat(&self, c: &Rational) -> Self {
        self.scale(&real(c.clone()))
    }

    /// Conjugates every coefficient. Over real variables this is the
    /// complex conjugate of the function.
    pub fn conj(&self) -> Self {
        SparsePoly {
            reg: self.reg.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, conj(c))).collect(),
        }
    }

    /// Real part of the function over real variables.
    pub fn re_part(&self) -> Self {
        Self::from_terms(
            &self.reg,
            self.terms.iter().map(|(m, c)| (*m, real(c.re.clone()))),
        )
    }

    /// Imaginary part of the function over real variables.
    pub fn im_part(&self) -> Self {
        Self::from_terms(
            &self.reg,
            self.terms.iter().map(|(m, c)| (*m, real(c.im.clone()))),
        )
    }

    /// Exact partial derivative in variable `var`.
    pub fn derivative(&self, var: usize) -> Self {
        assert!(var < self.reg.len(), "variable index out of range");
        let mut out = Self::zero(&self.reg);
        for (m, c) in &self.terms {
            if let Some(lowered) = m.lower(var) {
                let e = Rational::from_integer(BigInt::from(m.exponent(var)));
                add_into(&mut out.terms, lowered, c * real(e));
            }
        }
        out
    }

    pub fn derivative_named(&self, name: &str) -> Result<Self, PolyError> {
        Ok(self.derivative(self.reg.try_index_of(name)?))
    }

    fn check_point_len(&self, got: usize) -> Result<(), PolyError> {
        if got != self.reg.len() {
            return Err(PolyError::DimensionMismatch {
                expected: self.reg.len(),
                got,
            });
        }
        Ok(())
    }

    /// Exact value at a real rational point.
    ///
    /// Runs in integer arithmetic: the point is brought to a common
    /// denominator and coefficients to theirs, so no gcd is taken until the
    /// final division.
    pub fn eval(&self, point: &[Rational]) -> Result<GaussRational, PolyError> {
        self.check_point_len(point.len())?;
        if self.terms.is_empty() {
            return Ok(gzero());
        }
        let pden = point
            .iter()
            .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let pnum: Vec<BigInt> = point
            .iter()
            .map(|r| r.numer() * (&pden / r.denom()))
            .collect();
        let cden = self.terms.values().fold(BigInt::one(), |acc, c| {
            acc.lcm(c.re.denom()).lcm(c.im.denom())
        });
        let max_deg = self.degree().unwrap_or(0) as usize;
        let nv = point.len();
        let max_exp: Vec<usize> = (0..nv).map(|v| self.degree_in(v) as usize).collect();
        let powers: Vec<Vec<BigInt>> = (0..nv)
            .map(|v| {
                let mut row = Vec::with_capacity(max_exp[v] + 1);
                row.push(BigInt::one());
                for e in 1..=max_exp[v] {
                    let next = &row[e - 1] * &pnum[v];
                    row.push(next);
                }
                row
            })
            .collect();
        let mut den_pows = Vec::with_capacity(max_deg + 1);
        den_pows.push(BigInt::one());
        for e in 1..=max_deg {
            let next = &den_pows[e - 1] * &pden;
            den_pows.push(next);
        }
        let mut sum_re = BigInt::zero();
        let mut sum_im = BigInt::zero();
        for (m, c) in &self.terms {
            let mut val = den_pows[max_deg - m.degree() as usize].clone();
            for (v, row) in powers.iter().enumerate() {
                let e = m.exponent(v) as usize;
                if e > 0 {
                    val *= &row[e];
                }
            }
            if !c.re.is_zero() {
                sum_re += &val * (c.re.numer() * (&cden / c.re.denom()));
            }
            if !c.im.is_zero() {
                sum_im += &val * (c.im.numer() * (&cden / c.im.denom()));
            }
        }
        let total_den = cden * &den_pows[max_deg];
        Ok(GaussRational::new(
            Rational::new(sum_re, total_den.clone()),
            Rational::new(sum_im, total_den),
        ))
    }

    /// Exact value at a point with Gaussian-rational coordinates (used for
    /// holomorphic polynomials in complex symbols).
    pub fn eval_gauss(&self, point: &[GaussRational]) -> Result<GaussRational, PolyError> {
        self.check_point_len(point.len())?;
        let nv = point.len();
        let powers: Vec<Vec<GaussRational>> = (0..nv)
            .map(|v| {
                let top = self.degree_in(v) as usize;
                let mut row = vec![gone()];
                for e in 1..=top {
                    let next = mul_gauss(&row[e - 1], &point[v]);
                    row.push(next);
                }
                row
            })
            .collect();
        let mut sum = gzero();
        for (m, c) in &self.terms {
            let mut val = c.clone();
            for (v, row) in powers.iter().enumerate() {
                let e = m.exponent(v) as usize;
                if e > 0 {
                    val = mul_gauss(&val, &row[e]);
                }
            }
            sum += val;
        }
        Ok(sum)
    }

    /// Floating shadow evaluation at a real point.
    pub fn eval_f64(&self, point: &[f64]) -> Result<Complex64, PolyError> {
        self.check_point_len(point.len())?;
        let mut sum = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut val = 1.0;
            for (v, &x) in point.iter().enumerate() {
                let e = m.exponent(v);
                if e > 0 {
                    val *= x.powi(e as i32);
                }
            }
            sum += to_c64(c) * val;
        }
        Ok(sum)
    }

    /// Floating evaluation at a complex point (holomorphic symbol registries).
    pub fn eval_c64(&self, point: &[Complex64]) -> Result<Complex64, PolyError> {
        self.check_point_len(point.len())?;
        let mut sum = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut val = to_c64(c);
            for (v, &x) in point.iter().enumerate() {
                let e = m.exponent(v);
                if e > 0 {
                    val *= x.powi(e as i32);
                }
            }
            sum += val;
        }
        Ok(sum)
    }

    /// Substitutes `subst[i]` for variable `i`. All substitutes must share
    /// one target registry; the result lives over it.
    pub fn compose(&self, subst: &[SparsePoly]) -> Result<SparsePoly, PolyError> {
        if subst.len() != self.reg.len() {
            let missing = self
                .reg
                .names()
                .get(subst.len())
                .cloned()
                .unwrap_or_default();
            return Err(PolyError::MissingSubstitute(missing));
        }
        let target = match subst.first() {
            Some(s) => s.reg.clone(),
            // zero-variable registry: only a constant term can exist
            None => return Ok(self.clone()),
        };
        if subst.iter().any(|s| !same_registry(&s.reg, &target)) {
            return Err(PolyError::RegistryMismatch);
        }
        let terms: Vec<(Monomial, GaussRational)> =
            self.terms.iter().map(|(m, c)| (*m, c.clone())).collect();
        let mut cache: Vec<Vec<SparsePoly>> = vec![Vec::new(); subst.len()];
        compose_rec(&terms, 0, subst, &target, &mut cache)
    }

    /// Substitution by variable name; names absent from the map are an error.
    pub fn compose_named(
        &self,
        subst: &std::collections::HashMap<String, SparsePoly>,
    ) -> Result<SparsePoly, PolyError> {
        let list: Vec<SparsePoly> = self
            .reg
            .names()
            .iter()
            .map(|n| {
                subst
                    .get(n)
                    .cloned()
                    .ok_or_else(|| PolyError::MissingSubstitute(n.clone()))
            })
            .collect::<Result<_, _>>()?;
        self.compose(&list)
    }

    /// Canonical text: terms in descending graded-lex order, rational
    /// coefficients as `p/q`.
    pub fn to_canonical_string(&self) -> String {
        self.to_string()
    }

    pub fn parse(reg: &Arc<VarRegistry>, text: &str) -> Result<Self, PolyError> {
        parse_poly(reg, text)
    }
}

fn mul_gauss(a: &GaussRational, b: &GaussRational) -> GaussRational {
    // skip the imaginary cross terms for the (common) real case
    match (a.im.is_zero(), b.im.is_zero()) {
        (true, true) => real(&a.re * &b.re),
        _ => a * b,
    }
}

fn compose_rec(
    terms: &[(Monomial, GaussRational)],
    var: usize,
    subst: &[SparsePoly],
    target: &Arc<VarRegistry>,
    cache: &mut Vec<Vec<SparsePoly>>,
) -> Result<SparsePoly, PolyError> {
    if var == subst.len() {
        let mut c = gzero();
        for (_, t) in terms {
            c += t.clone();
        }
        return Ok(SparsePoly::constant(target, c));
    }
    let mut groups: BTreeMap<u32, Vec<(Monomial, GaussRational)>> = BTreeMap::new();
    for (m, c) in terms {
        groups
            .entry(m.exponent(var))
            .or_default()
            .push((*m, c.clone()));
    }
    let mut out = SparsePoly::zero(target);
    for (e, group) in groups {
        let inner = compose_rec(&group, var + 1, subst, target, cache)?;
        if inner.is_zero() {
            continue;
        }
        let piece = if e == 0 {
            inner
        } else {
            let p = power_cached(cache, subst, var, e as usize)?;
            p.checked_mul(&inner)?
        };
        for (m, c) in piece.terms {
            add_into(&mut out.terms, m, c);
        }
    }
    Ok(out)
}

fn power_cached(
    cache: &mut [Vec<SparsePoly>],
    subst: &[SparsePoly],
    var: usize,
    e: usize,
) -> Result<SparsePoly, PolyError> {
    let row = &mut cache[var];
    if row.is_empty() {
        row.push(SparsePoly::one(&subst[var].reg));
    }
    while row.len() <= e {
        let next = row.last().unwrap().checked_mul(&subst[var])?;
        row.push(next);
    }
    Ok(row[e].clone())
}

impl PartialEq for SparsePoly {
    fn eq(&self, other: &Self) -> bool {
        same_registry(&self.reg, &other.reg) && self.terms == other.terms
    }
}

impl Eq for SparsePoly {}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparsePoly({self})")
    }
}

fn fmt_monomial(reg: &VarRegistry, m: &Monomial) -> String {
    let mut parts = Vec::new();
    for v in 0..reg.len() {
        match m.exponent(v) {
            0 => {}
            1 => parts.push(reg.name(v).to_string()),
            e => parts.push(format!("{}^{}", reg.name(v), e)),
        }
    }
    parts.join("*")
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative_real = c.im.is_zero() && c.re.is_negative();
            let shown = if negative_real { -c.clone() } else { c.clone() };
            if i == 0 {
                if negative_real {
                    write!(f, "-")?;
                }
            } else if negative_real {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mono = fmt_monomial(&self.reg, m);
            let coef = fmt_gauss(&shown);
            if mono.is_empty() {
                write!(f, "{coef}")?;
            } else if shown == gone() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{coef}*{mono}")?;
            }
        }
        Ok(())
    }
}

fn parse_poly(reg: &Arc<VarRegistry>, text: &str) -> Result<SparsePoly, PolyError> {
    let t = text.trim();
    if t == "0" {
        return Ok(SparsePoly::zero(reg));
    }
    // split at top-level " + " / " - " separators
    let mut pieces: Vec<(bool, &str)> = Vec::new();
    let mut rest = t;
    let mut negative = false;
    if let Some(r) = rest.strip_prefix('-') {
        negative = true;
        rest = r;
    }
    loop {
        let plus = rest.find(" + ");
        let minus = rest.find(" - ");
        let next = match (plus, minus) {
            (Some(p), Some(m)) => Some(p.min(m)),
            (p, m) => p.or(m),
        };
        match next {
            Some(pos) => {
                pieces.push((negative, &rest[..pos]));
                negative = &rest[pos..pos + 3] == " - ";
                rest = &rest[pos + 3..];
            }
            None => {
                pieces.push((negative, rest));
                break;
            }
        }
    }
    let mut out = SparsePoly::zero(reg);
    for (neg, piece) in pieces {
        let (coef, mono_txt) = split_term(piece)?;
        let mut exps = vec![0u32; reg.len()];
        if let Some(mt) = mono_txt {
            for factor in mt.split('*') {
                let (name, e) = match factor.split_once('^') {
                    Some((n, e)) => (
                        n,
                        e.parse::<u32>()
                            .map_err(|_| PolyError::Parse(factor.to_string()))?,
                    ),
                    None => (factor, 1),
                };
                let idx = reg.try_index_of(name)?;
                exps[idx] += e;
            }
        }
        let c = if neg { -coef } else { coef };
        add_into(&mut out.terms, Monomial::from_exponents(&exps)?, c);
    }
    Ok(out)
}

fn split_term(piece: &str) -> Result<(GaussRational, Option<&str>), PolyError> {
    let is_numeric = |s: &str| {
        s.chars()
            .next()
            .map(|c| c.is_ascii_digit() || c == '-' || c == '(')
            .unwrap_or(false)
    };
    if piece.starts_with('(') {
        let close = piece
            .find(')')
            .ok_or_else(|| PolyError::Parse(piece.to_string()))?;
        let coef = parse_gauss(&piece[..=close])?;
        let rest = &piece[close + 1..];
        return Ok(match rest.strip_prefix('*') {
            Some(m) => (coef, Some(m)),
            None => (coef, None),
        });
    }
    if !is_numeric(piece) {
        return Ok((gone(), Some(piece)));
    }
    match piece.split_once('*') {
        None => Ok((parse_gauss(piece)?, None)),
        Some((num, rest)) => {
            if rest == "i" {
                return Ok((parse_gauss(piece)?, None));
            }
            if let Some(m) = rest.strip_prefix("i*") {
                return Ok((parse_gauss(&format!("{num}*i"))?, Some(m)));
            }
            Ok((parse_gauss(num)?, Some(rest)))
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&SparsePoly> for &SparsePoly {
            type Output = SparsePoly;
            fn $method(self, rhs: &SparsePoly) -> SparsePoly {
                self.$checked(rhs).expect(concat!("SparsePoly::", stringify!($method)))
            }
        }
        impl $tr<SparsePoly> for SparsePoly {
            type Output = SparsePoly;
            fn $method(self, rhs: SparsePoly) -> SparsePoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&SparsePoly> for SparsePoly {
            type Output = SparsePoly;
            fn $method(self, rhs: &SparsePoly) -> SparsePoly {
                (&self).$method(rhs)
            }
        }
        impl $tr<SparsePoly> for &SparsePoly {
            type Output = SparsePoly;
            fn $method(self, rhs: SparsePoly) -> SparsePoly {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        SparsePoly {
            reg: self.reg.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

impl Neg for SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        -&self
    }
}
