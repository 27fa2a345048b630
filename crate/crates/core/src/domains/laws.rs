//! Sampling probes for the order, lattice and semiring laws of a domain.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Domain, DomainError, Value};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LawReport {
    /// Sampled triples.
    pub cases: usize,
    pub violations: Vec<String>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn eq(d: &Domain, a: &Value, b: &Value) -> Result<bool, DomainError> {
    Ok(d.leq(a, b)? && d.leq(b, a)?)
}

fn bound(r: Result<Value, DomainError>) -> Result<Option<Value>, DomainError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(DomainError::NoLub { .. } | DomainError::NoGlb { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Checks the laws on `cases` random triples. Semiring laws are checked only
/// for domains that carry a semiring.
pub fn probe_laws(d: &Domain, cases: usize, seed: u64) -> Result<LawReport, DomainError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = LawReport { cases, violations: Vec::new() };
    let bottom = d.bottom().ok();
    let top = d.top().ok();
    for _ in 0..cases {
        let (a, b, c) = (d.sample(&mut rng), d.sample(&mut rng), d.sample(&mut rng));
        let mut fail = |law: &str| report.violations.push(format!("{law} fails on a={a}, b={b}, c={c}"));
        if !d.leq(&a, &a)? {
            fail("reflexivity");
        }
        if d.leq(&a, &b)? && d.leq(&b, &a)? && a != b {
            fail("antisymmetry");
        }
        if d.leq(&a, &b)? && d.leq(&b, &c)? && !d.leq(&a, &c)? {
            fail("transitivity");
        }
        // Partial lattices such as the discrete order lack some bounds.
        if let Some(j) = bound(d.join(&a, &b))? {
            if !d.leq(&a, &j)? || !d.leq(&b, &j)? || (d.leq(&a, &c)? && d.leq(&b, &c)? && !d.leq(&j, &c)?) {
                fail("join is the least upper bound");
            }
        }
        if let Some(m) = bound(d.meet(&a, &b))? {
            if !d.leq(&m, &a)? || !d.leq(&m, &b)? || (d.leq(&c, &a)? && d.leq(&c, &b)? && !d.leq(&c, &m)?) {
                fail("meet is the greatest lower bound");
            }
        }
        if let Some(bot) = &bottom {
            if !d.leq(bot, &a)? {
                fail("bottom is least");
            }
        }
        if let Some(top) = &top {
            if !d.leq(&a, top)? {
                fail("top is greatest");
            }
        }
        if !d.is_semiring() {
            continue;
        }
        let plus = |x: &Value, y: &Value| d.plus(&[x.clone(), y.clone()]);
        if !eq(d, &plus(&a, &b)?, &plus(&b, &a)?)? {
            fail("+ commutes");
        }
        if !eq(d, &plus(&plus(&a, &b)?, &c)?, &plus(&a, &plus(&b, &c)?)?)? {
            fail("+ associates");
        }
        if !eq(d, &plus(&a, &a)?, &a)? {
            fail("+ is idempotent");
        }
        if !eq(d, &d.times(&a, &b)?, &d.times(&b, &a)?)? {
            fail("x commutes");
        }
        if !eq(d, &d.times(&d.times(&a, &b)?, &c)?, &d.times(&a, &d.times(&b, &c)?)?)? {
            fail("x associates");
        }
        let distributed = plus(&d.times(&a, &b)?, &d.times(&a, &c)?)?;
        if !eq(d, &d.times(&a, &plus(&b, &c)?)?, &distributed)? {
            fail("x distributes over +");
        }
        let zero = d.plus(&[])?;
        let one = d.times_all(&[])?;
        if !eq(d, &plus(&a, &zero)?, &a)? {
            fail("0 is the unit of +");
        }
        if !eq(d, &d.times(&a, &one)?, &a)? {
            fail("1 is the unit of x");
        }
        if !eq(d, &d.times(&a, &zero)?, &zero)? {
            fail("0 absorbs x");
        }
        if !eq(d, &plus(&a, &one)?, &one)? {
            fail("1 absorbs +");
        }
        if d.leq(&a, &b)? != eq(d, &plus(&a, &b)?, &b)? {
            fail("a <= b iff a + b = b");
        }
    }
    Ok(report)
}
