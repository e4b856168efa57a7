//! Text form of maps: a small recursive-descent parser and the canonical
//! printer.
//!
//! ```text
//! expr   := '-'? term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := base ('^' uint)?
//! base   := 'z' | number | gen | '(' expr ')'
//! number := int ('/' uint)?
//! gen    := 'i' | 'sqrt(-' uint ')'
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ratmap::{Mobius, RatMap};
use crate::scalar::ExactField;

const MAX_EXPONENT: u64 = 4096;

#[derive(Clone)]
struct Frac<K> {
    num: Poly<K>,
    den: Poly<K>,
}

impl<K: ExactField> Frac<K> {
    fn constant(c: K) -> Self {
        Frac { num: Poly::constant(c), den: Poly::one() }
    }
    fn add(self, o: Self) -> Self {
        Frac { num: self.num * &o.den + o.num * &self.den, den: self.den * &o.den }.reduce()
    }
    fn neg(self) -> Self {
        Frac { num: -self.num, den: self.den }
    }
    fn mul(self, o: Self) -> Self {
        Frac { num: self.num * &o.num, den: self.den * &o.den }.reduce()
    }
    fn div(self, o: Self) -> Option<Self> {
        if o.num.is_zero() {
            return None;
        }
        Some(Frac { num: self.num * &o.den, den: self.den * &o.num }.reduce())
    }
    fn reduce(self) -> Self {
        if self.num.is_zero() {
            return Frac { num: Poly::zero(), den: Poly::one() };
        }
        let g = self.num.gcd(&self.den);
        let (n, d) = (self.num.divrem(&g).0, self.den.divrem(&g).0);
        let l = d.lc().inv();
        Frac { num: n.scale(&l), den: d.scale(&l) }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn uint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            self.pos = start;
            return self.err("expected digits");
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(txt.parse().unwrap())
    }

    fn expr<K: ExactField>(&mut self) -> Result<Frac<K>> {
        let neg = self.eat(b'-');
        let mut acc = self.term::<K>()?;
        if neg {
            acc = acc.neg();
        }
        loop {
            if self.eat(b'+') {
                acc = acc.add(self.term()?);
            } else if self.eat(b'-') {
                acc = acc.add(self.term::<K>()?.neg());
            } else {
                return Ok(acc);
            }
        }
    }

    fn term<K: ExactField>(&mut self) -> Result<Frac<K>> {
        let mut acc = self.factor::<K>()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(self.factor()?);
            } else if self.peek() == Some(b'/') {
                let at = self.pos;
                self.pos += 1;
                let rhs = self.factor::<K>()?;
                match acc.div(rhs) {
                    Some(v) => acc = v,
                    None => {
                        self.pos = at;
                        return Err(Error::DegenerateMap("division by zero".into()));
                    }
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor<K: ExactField>(&mut self) -> Result<Frac<K>> {
        let b = self.base::<K>()?;
        if self.eat(b'^') {
            let at = self.pos;
            let e = self.uint()?;
            let e: u64 = match e.try_into() {
                Ok(v) if v <= MAX_EXPONENT => v,
                _ => {
                    self.pos = at;
                    return self.err("exponent too large");
                }
            };
            let mut acc = Frac::constant(K::one());
            for _ in 0..e {
                acc = acc.mul(b.clone());
            }
            return Ok(acc);
        }
        Ok(b)
    }

    fn base<K: ExactField>(&mut self) -> Result<Frac<K>> {
        match self.peek() {
            Some(b'z') => {
                self.pos += 1;
                Ok(Frac { num: Poly::x(), den: Poly::one() })
            }
            Some(b'i') => {
                if K::DISC != 1 {
                    return self.err("i is not in the coefficient field");
                }
                self.pos += 1;
                Ok(Frac::constant(K::generator()))
            }
            Some(b's') => self.sqrt(),
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.uint()?;
                let save = self.pos;
                if self.eat(b'/') && self.peek().map_or(false, |c| c.is_ascii_digit()) {
                    let at = self.pos;
                    let d = self.uint()?;
                    if d.is_zero() {
                        self.pos = at;
                        return Err(Error::DegenerateMap("division by zero".into()));
                    }
                    return Ok(Frac::constant(K::from_rational(BigRational::new(n, d))));
                }
                self.pos = save;
                Ok(Frac::constant(K::from_rational(BigRational::from_integer(n))))
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }

    fn sqrt<K: ExactField>(&mut self) -> Result<Frac<K>> {
        let start = self.pos;
        for &c in b"sqrt(-" {
            if self.peek() != Some(c) {
                return self.err("expected sqrt(-N)");
            }
            self.pos += 1;
        }
        let n = self.uint()?;
        if !self.eat(b')') {
            return self.err("expected ')'");
        }
        // sqrt(-n) = s sqrt(-D) when n = D s^2
        let d = BigInt::from(K::DISC);
        if !n.is_zero() && (&n % &d).is_zero() {
            let q = &n / &d;
            let s = q.sqrt();
            if &s * &s == q {
                return Ok(Frac::constant(K::from_parts(BigRational::zero(), BigRational::from_integer(s))));
            }
        }
        self.pos = start;
        self.err(format!("sqrt(-{n}) is not in the coefficient field"))
    }
}

/// Parse a map in the variable `z`.
pub fn parse_map<K: ExactField>(text: &str) -> Result<RatMap<K>> {
    let mut p = Parser { s: text.as_bytes(), pos: 0 };
    let v = p.expr::<K>()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    RatMap::new(v.num, v.den)
}

/// Parse a fixture corpus: one map per line, `#` starts a comment.
pub fn parse_corpus<K: ExactField>(text: &str) -> Result<Vec<RatMap<K>>> {
    text.lines()
        .map(|l| l.split('#').next().unwrap().trim())
        .filter(|l| !l.is_empty())
        .map(parse_map)
        .collect()
}

fn monomial(k: usize, var: &str) -> String {
    match k {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{k}"),
    }
}

fn term_string<K: ExactField>(c: &K, k: usize, var: &str) -> String {
    coeff_times(c, &monomial(k, var))
}

/// `c*mono` in canonical form; an empty monomial stands for `1`.
pub fn coeff_times<K: ExactField>(c: &K, mono: &str) -> String {
    if mono.is_empty() {
        return c.to_string();
    }
    let (re, im) = c.parts();
    if im.is_zero() {
        if re.is_one() {
            mono.to_string()
        } else if (-re).is_one() {
            format!("-{mono}")
        } else {
            format!("{c}*{mono}")
        }
    } else if re.is_zero() {
        format!("{c}*{mono}")
    } else {
        format!("({c})*{mono}")
    }
}

/// Canonical text of a polynomial, highest degree first.
pub fn poly_to_string<K: ExactField>(p: &Poly<K>, var: &str) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for k in (0..=p.deg()).rev() {
        let c = p.coeff(k);
        if c.is_zero() {
            continue;
        }
        let t = term_string(&c, k, var);
        if !out.is_empty() && !t.starts_with('-') {
            out.push('+');
        }
        out.push_str(&t);
    }
    out
}

fn nonzero_terms<K: ExactField>(p: &Poly<K>) -> usize {
    p.coeffs().iter().filter(|c| !c.is_zero()).count()
}

fn is_compound<K: ExactField>(p: &Poly<K>) -> bool {
    let n = nonzero_terms(p);
    if n > 1 {
        return true;
    }
    let lc = p.lc();
    let (a, b) = lc.parts();
    n == 1 && p.deg() == 0 && !a.is_zero() && !b.is_zero()
}

impl<K: ExactField> fmt::Display for RatMap<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = poly_to_string(self.p(), "z");
        if self.q().deg() == 0 {
            return write!(f, "{num}");
        }
        let den = poly_to_string(self.q(), "z");
        let num = if is_compound(self.p()) { format!("({num})") } else { num };
        let lone = nonzero_terms(self.q()) == 1 && self.q().lc().is_one();
        if lone {
            write!(f, "{num}/{den}")
        } else {
            write!(f, "{num}/({den})")
        }
    }
}

impl<K: ExactField> fmt::Debug for RatMap<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<K: ExactField> fmt::Display for Mobius<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_map(), f)
    }
}
