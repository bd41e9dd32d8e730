//! Truncated integer power series: Poincaré and Bass series, exact
//! rational-form checks, recurrence inference and growth checks.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::chains::{BFamily, Chain};
use crate::exactlin::{Field, Matrix, Rationals};
use crate::modcalc::{residue_field_module, BassMethod, Engine, FiniteModule, Status, Verdict};

/// Bass series are cross-checked against `Ext(k, M)` up to this order.
pub const BASS_CROSS_CHECK: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("no linear recurrence of degree at most {0} fits the series")]
    NoRecurrence(usize),
    #[error("series of order {order} is too short for degree {max_degree}; need order at least {}", 2 * .max_degree)]
    TooShort { order: usize, max_degree: usize },
    #[error("Bass numbers disagree at degree {degree}: Matlis {matlis}, Ext(k, M) {direct}")]
    BassMismatch { degree: usize, matlis: usize, direct: usize },
    #[error("rational form factors must be positive integers")]
    BadFactor,
}

/// `c_0 + c_1 t + ... + c_N t^N`, known through order `N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least c_0");
        TruncatedSeries { coeffs }
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn from_counts(c: &[usize]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn one(order: usize) -> Self {
        let mut c = vec![BigInt::zero(); order + 1];
        c[0] = BigInt::one();
        Self::new(c)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &BigInt {
        &self.coeffs[i]
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs[..=order.min(self.order())].to_vec())
    }

    /// Product known through the smaller of the two orders.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut c = vec![BigInt::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    /// Multiplies by a polynomial given low degree first, keeping the order.
    pub fn mul_poly(&self, p: &[BigInt]) -> Self {
        let n = self.order();
        let mut c = vec![BigInt::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in p.iter().enumerate().take(n + 1 - i) {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| c.to_i64()).collect()
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

struct Coeff<'a>(&'a BigInt);

impl Serialize for Coeff<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(x) => s.serialize_i64(x),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl Serialize for TruncatedSeries {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let coeffs: Vec<Coeff> = self.coeffs.iter().map(Coeff).collect();
        let mut st = s.serialize_struct("TruncatedSeries", 2)?;
        st.serialize_field("coeffs", &coeffs)?;
        st.serialize_field("order", &self.order())?;
        st.end()
    }
}

/// `∏ (a - t) / ∏ (1 - d t)` with positive integers `a` and `d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RationalFormSpec {
    numerator_factors: Vec<u64>,
    denominator_factors: Vec<u64>,
}

impl RationalFormSpec {
    pub fn new(mut numerator: Vec<u64>, mut denominator: Vec<u64>) -> Result<Self, SeriesError> {
        if numerator.iter().chain(&denominator).any(|&x| x == 0) {
            return Err(SeriesError::BadFactor);
        }
        numerator.sort_unstable();
        denominator.sort_unstable();
        Ok(RationalFormSpec {
            numerator_factors: numerator,
            denominator_factors: denominator,
        })
    }

    /// `1 / ∏ (1 - d t)`.
    pub fn inverse_product(denominator: Vec<u64>) -> Result<Self, SeriesError> {
        Self::new(Vec::new(), denominator)
    }

    /// `∏ (b - t) / (1 - b t)` over the given `b`.
    pub fn symmetric_product(bs: Vec<u64>) -> Result<Self, SeriesError> {
        Self::new(bs.clone(), bs)
    }

    pub fn numerator_factors(&self) -> &[u64] {
        &self.numerator_factors
    }

    pub fn denominator_factors(&self) -> &[u64] {
        &self.denominator_factors
    }

    pub fn numerator_poly(&self) -> Vec<BigInt> {
        self.numerator_factors
            .iter()
            .fold(vec![BigInt::one()], |p, &a| poly_mul(&p, &[BigInt::from(a), BigInt::from(-1)]))
    }

    pub fn denominator_poly(&self) -> Vec<BigInt> {
        self.denominator_factors
            .iter()
            .fold(vec![BigInt::one()], |p, &d| poly_mul(&p, &[BigInt::one(), -BigInt::from(d)]))
    }

    /// The power series expansion through `order`.
    pub fn expand(&self, order: usize) -> TruncatedSeries {
        let mut s = TruncatedSeries::new(pad(self.numerator_poly(), order));
        for &d in &self.denominator_factors {
            let mut g = Vec::with_capacity(order + 1);
            let mut x = BigInt::one();
            for _ in 0..=order {
                g.push(x.clone());
                x *= d;
            }
            s = s.mul(&TruncatedSeries::new(g));
        }
        s
    }
}

impl fmt::Display for RationalFormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num: String = self.numerator_factors.iter().map(|a| format!("({a}-t)")).collect();
        let den: String = self.denominator_factors.iter().map(|d| format!("(1-{d}t)")).collect();
        let num = if num.is_empty() { "1".to_string() } else { num };
        match self.denominator_factors.len() {
            0 => f.write_str(&num),
            1 => write!(f, "{num}/{den}"),
            _ => write!(f, "{num}/({den})"),
        }
    }
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    c
}

fn pad(mut p: Vec<BigInt>, order: usize) -> Vec<BigInt> {
    p.resize(order + 1, BigInt::zero());
    p.truncate(order + 1);
    p
}

/// Multiplies `s` by the denominator and compares with the numerator through
/// the order of `s`, exactly.
pub fn matches_rational_form(s: &TruncatedSeries, spec: &RationalFormSpec) -> bool {
    s.mul_poly(&spec.denominator_poly()).coeffs == pad(spec.numerator_poly(), s.order())
}

/// Denominator `1 - a_1 t - ... - a_d t^d` of a linear recurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Denominator {
    coeffs: Vec<BigRational>,
}

impl Denominator {
    /// Coefficients low degree first, starting with 1.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }

    /// Positive integers `d_i` with `∏ (1 - d_i t)` equal to this polynomial,
    /// found by trial division over the divisors of the top coefficient.
    pub fn factor(&self) -> Option<Vec<u64>> {
        let mut p = self.integer_coeffs()?;
        let mut roots = Vec::new();
        while p.len() > 1 {
            // Reversed, p becomes monic in x with roots d_i.
            let top = p.last().unwrap().abs().to_u64()?;
            let d = divisors(top).into_iter().find(|&d| divides_out(&p, d).is_some())?;
            p = divides_out(&p, d).unwrap();
            roots.push(d);
        }
        roots.sort_unstable();
        Some(roots)
    }
}

impl fmt::Display for Denominator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::from("1");
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { '-' } else { '+' };
            let mag = c.abs();
            let mag = if mag.is_one() { String::new() } else { mag.to_string() };
            let pow = if i == 1 { "t".to_string() } else { format!("t^{i}") };
            out.push_str(&format!("{sign}{mag}{pow}"));
        }
        f.write_str(&out)
    }
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

// Divides p(t) by (1 - d t) if exact.
fn divides_out(p: &[BigInt], d: u64) -> Option<Vec<BigInt>> {
    let d = BigInt::from(d);
    let mut q = Vec::with_capacity(p.len() - 1);
    let mut carry = BigInt::zero();
    for c in &p[..p.len() - 1] {
        let x = c + &carry;
        carry = &x * &d;
        q.push(x);
    }
    (p.last().unwrap() + carry).is_zero().then_some(q)
}

/// Smallest `d <= max_degree` such that `c_m = a_1 c_{m-1} + ... + a_d c_{m-d}`
/// for every `m` in `d+1..=N`, solved exactly from a Hankel system.
pub fn infer_denominator(s: &TruncatedSeries, max_degree: usize) -> Result<Denominator, SeriesError> {
    let n = s.order();
    if n < 2 * max_degree {
        return Err(SeriesError::TooShort { order: n, max_degree });
    }
    let q = Rationals;
    let c: Vec<BigRational> = s.coeffs.iter().map(|x| BigRational::from_integer(x.clone())).collect();
    for d in 0..=max_degree {
        let a: Vec<BigRational> = if d == 0 {
            Vec::new()
        } else {
            let h = Matrix::from_fn(&q, d, d, |r, j| c[d + 1 + r - 1 - j].clone());
            let rhs = Matrix::from_fn(&q, d, 1, |r, _| c[d + 1 + r].clone());
            match h.solve(&rhs) {
                Ok(x) => (0..d).map(|j| x.get(j, 0).clone()).collect(),
                Err(_) => continue,
            }
        };
        let fits = (d + 1..=n).all(|m| {
            let pred = (1..=d).fold(BigRational::zero(), |acc, j| acc + &a[j - 1] * &c[m - j]);
            pred == c[m]
        });
        if fits {
            let mut coeffs = vec![BigRational::one()];
            coeffs.extend(a.into_iter().map(|x| -x));
            return Ok(Denominator { coeffs });
        }
    }
    Err(SeriesError::NoRecurrence(max_degree))
}

/// `numerator / denominator` recovered from a series by [`infer_denominator`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InferredForm {
    pub numerator: Vec<BigInt>,
    pub denominator: Denominator,
    /// The `d_i` when the denominator is `∏ (1 - d_i t)`.
    pub roots: Option<Vec<u64>>,
}

fn render_poly(p: &[BigInt]) -> String {
    let mut out = String::new();
    for (i, c) in p.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let sign = if c.is_negative() { "-" } else if out.is_empty() { "" } else { "+" };
        let mag = c.abs();
        let body = match i {
            0 => mag.to_string(),
            _ => {
                let pow = if i == 1 { "t".to_string() } else { format!("t^{i}") };
                if mag.is_one() {
                    pow
                } else {
                    format!("{mag}{pow}")
                }
            }
        };
        out.push_str(sign);
        out.push_str(&body);
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

impl fmt::Display for InferredForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = render_poly(&self.numerator);
        let num = if self.numerator.iter().filter(|c| !c.is_zero()).count() > 1 {
            format!("({num})")
        } else {
            num
        };
        match &self.roots {
            Some(r) if r.is_empty() => f.write_str(&num),
            Some(r) => {
                let den: String = r.iter().map(|d| format!("(1-{d}t)")).collect();
                if r.len() == 1 {
                    write!(f, "{num}/{den}")
                } else {
                    write!(f, "{num}/({den})")
                }
            }
            None => write!(f, "{num}/({})", self.denominator),
        }
    }
}

/// Denominator from [`infer_denominator`] plus the matching numerator, which
/// has degree at most that of the denominator.
pub fn infer_rational_form(s: &TruncatedSeries, max_degree: usize) -> Result<InferredForm, SeriesError> {
    let denominator = infer_denominator(s, max_degree)?;
    let d = denominator.degree();
    let den = denominator.integer_coeffs();
    let numerator = match &den {
        Some(p) => s.mul_poly(p).coeffs[..=d.min(s.order())].to_vec(),
        None => return Err(SeriesError::NoRecurrence(max_degree)),
    };
    let roots = denominator.factor();
    Ok(InferredForm {
        numerator,
        denominator,
        roots,
    })
}

/// `P_M(t)` through `order`.
pub fn poincare_series<K: Field>(engine: &Engine<K>, m: &FiniteModule<K>, order: usize) -> TruncatedSeries {
    TruncatedSeries::from_counts(&engine.betti(m, order))
}

/// `I^M(t)` through `order` via Matlis duality, cross-checked against
/// `Ext(k, M)` through `min(order, check_order)`.
pub fn bass_series_checked<K: Field>(
    engine: &Engine<K>,
    m: &FiniteModule<K>,
    order: usize,
    check_order: usize,
) -> Result<TruncatedSeries, SeriesError> {
    let matlis = engine.bass_numbers(m, order, BassMethod::Matlis);
    let c = order.min(check_order);
    let k = residue_field_module(m.algebra());
    let direct = engine.ext_dims_direct(&k, m, c).expect("same algebra");
    for i in 0..=c {
        if matlis[i] != direct[i] {
            return Err(SeriesError::BassMismatch {
                degree: i,
                matlis: matlis[i],
                direct: direct[i],
            });
        }
    }
    Ok(TruncatedSeries::from_counts(&matlis))
}

pub fn bass_series<K: Field>(engine: &Engine<K>, m: &FiniteModule<K>, order: usize) -> Result<TruncatedSeries, SeriesError> {
    bass_series_checked(engine, m, order, BASS_CROSS_CHECK)
}

#[derive(Clone, Debug, Serialize)]
pub struct T1Report {
    pub n: usize,
    pub nilpotency_index: usize,
    pub status: Status,
    pub poincare_k: Option<TruncatedSeries>,
    pub denominator: Option<String>,
    pub roots: Option<Vec<u64>>,
    pub details: Vec<String>,
}

/// `m^n != 0` for a suitable chain of length `n`; when `m^{n+1} = 0` the
/// Poincaré series of `k` is `1 / ∏ (1 - d_i t)` with `n` positive `d_i`.
pub fn verify_t1<K: Field>(engine: &Engine<K>, chain: &Chain<K>, order: usize) -> T1Report {
    let n = chain.length();
    let l = chain.algebra().nilpotency_index();
    let mut r = T1Report {
        n,
        nilpotency_index: l,
        status: Status::Pass,
        poincare_k: None,
        denominator: None,
        roots: None,
        details: Vec::new(),
    };
    if l <= n {
        r.status = Status::Fail;
        r.details.push(format!("m^{n} = 0 (nilpotency index {l})"));
        return r;
    }
    if l > n + 1 {
        r.details.push(format!("nilpotency index {l} > n+1; no rational form is claimed"));
        return r;
    }
    let pk = poincare_series(engine, &residue_field_module(chain.algebra()), order);
    match infer_denominator(&pk, n) {
        Ok(den) => {
            r.denominator = Some(den.to_string());
            match den.factor() {
                Some(roots) if roots.len() == n => {
                    let spec = RationalFormSpec::inverse_product(roots.clone()).expect("positive roots");
                    if !matches_rational_form(&pk, &spec) {
                        r.status = Status::Fail;
                        r.details.push(format!("{spec} does not reproduce the series"));
                    }
                    r.roots = Some(roots);
                }
                Some(roots) => {
                    r.status = Status::Fail;
                    r.details.push(format!("denominator has degree {} < n", roots.len()));
                    r.roots = Some(roots);
                }
                None => {
                    r.status = Status::Fail;
                    r.details.push(format!("{den} has no factorization into (1 - d t) with d > 0"));
                }
            }
        }
        Err(SeriesError::TooShort { .. }) => {
            r.status = Status::Inconclusive;
            r.details.push(format!("order {order} is too short to infer a degree-{n} denominator"));
        }
        Err(e) => {
            r.status = Status::Fail;
            r.details.push(e.to_string());
        }
    }
    r.poincare_k = Some(pk);
    r
}

/// One rational-form identity checked on a computed series.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub id: String,
    pub form: String,
    pub series: TruncatedSeries,
    pub status: Status,
}

fn check_form(id: String, s: TruncatedSeries, spec: &RationalFormSpec) -> IdentityCheck {
    let status = Status::from_bool(matches_rational_form(&s, spec));
    IdentityCheck {
        id,
        form: spec.to_string(),
        series: s,
        status,
    }
}

fn as_u64(x: &BigInt) -> u64 {
    x.to_u64().unwrap_or(0)
}

/// Poincaré and Bass series of the chain modules and the B-family against
/// the product forms built from `β_0(B_j)`, through `order`.
pub fn verify_series_identities<K: Field>(
    engine: &Engine<K>,
    chain: &Chain<K>,
    family: &BFamily<K>,
    order: usize,
) -> Result<Vec<IdentityCheck>, SeriesError> {
    let n = chain.length();
    let full = (1usize << n) - 1;
    let beta0: Vec<u64> = (1..=n).map(|i| engine.betti(family.b(i), 0)[0] as u64).collect();
    let factor = |js: &mut dyn Iterator<Item = usize>| {
        let bs: Vec<u64> = js.map(|j| beta0[j - 1]).collect();
        RationalFormSpec::symmetric_product(bs).map_err(|_| SeriesError::BadFactor)
    };
    let mut out = Vec::new();
    for i in 1..=n {
        let spec = factor(&mut std::iter::once(i))?;
        out.push(check_form(format!("P[B{i}]"), poincare_series(engine, family.b(i), order), &spec));
    }
    for i in 1..=n {
        let comp = family.subset(full & !(1 << (i - 1)));
        let s = bass_series(engine, comp, order)?;
        let mu0 = as_u64(s.coeff(0));
        out.push(IdentityCheck {
            id: format!("mu0[B(all-{i})] = beta0[B{i}]"),
            form: format!("{}", beta0[i - 1]),
            series: s.truncate(0),
            status: Status::from_bool(mu0 == beta0[i - 1]),
        });
        let spec = RationalFormSpec::symmetric_product(vec![mu0.max(1)])?;
        out.push(check_form(format!("I[B(all-{i})]"), s, &spec));
    }
    for i in 1..=n {
        let spec = factor(&mut (1..=i))?;
        out.push(check_form(format!("P[C{i}]"), poincare_series(engine, chain.module(i), order), &spec));
    }
    for i in 0..=n {
        let spec = factor(&mut (i + 1..=n))?;
        let id = if i == 0 { "I[R]".to_string() } else { format!("I[C{i}]") };
        out.push(check_form(id, bass_series(engine, chain.module(i), order)?, &spec));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    pub strictly_increasing: bool,
    /// First `j` with `c_{j+1} <= c_j`.
    pub first_stall: Option<usize>,
    pub alpha: Option<u64>,
    /// `c_j >= alpha^j` for `j >= 1`, when `alpha` is given.
    pub dominates: Option<bool>,
}

impl GrowthReport {
    pub fn holds(&self) -> bool {
        self.strictly_increasing && self.dominates != Some(false)
    }
}

pub fn verify_growth(s: &TruncatedSeries, alpha: Option<u64>) -> GrowthReport {
    let c = s.coeffs();
    let first_stall = (0..s.order()).find(|&j| c[j + 1] <= c[j]);
    let dominates = alpha.map(|a| {
        let mut pow = BigInt::one();
        (1..=s.order()).all(|j| {
            pow *= a;
            c[j] >= pow
        })
    });
    GrowthReport {
        strictly_increasing: first_stall.is_none(),
        first_stall,
        alpha,
        dominates,
    }
}

/// `c_j >= binomial(j + n - 1, n - 1)` for every `j`.
pub fn binomial_lower_bound(s: &TruncatedSeries, n: usize) -> bool {
    if n == 0 {
        return true;
    }
    s.coeffs().iter().enumerate().all(|(j, c)| *c >= binomial(j + n - 1, n - 1))
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Package-level summary status for a list of identity checks.
pub fn identities_status(checks: &[IdentityCheck]) -> Verdict {
    let mut v = Verdict::pass(0);
    for c in checks {
        if c.status != Status::Pass {
            v.status = v.status.and(c.status);
            v.details.push(format!("{} != {} (series {})", c.id, c.form, c.series));
        }
    }
    v
}
