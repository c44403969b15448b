//! Test-function mini-language.
//!
//! ```text
//! const:<c>
//! mode:<k>:<a>
//! sum:<k1>:<a1>,<k2>:<a2>,...
//! random:<K>:<seed>
//! conformal:<t>            sphere only
//! pluri:<j>:<a>:<phase>    CR only
//! ```
//!
//! On the CR sphere `mode` and `sum` address the flat real basis index, and
//! `random` draws a pluriharmonic field so that both CR inequalities apply.

use std::fmt;
use std::sync::Arc;

use onofri_core::cr::{CrContext, DiskField};
use onofri_core::extremal::conformal_factor_field;
use onofri_core::sphere::{SphereContext, ZonalField};

#[derive(Debug, Clone, PartialEq)]
pub enum FieldSpec {
    Const(f64),
    Mode(usize, f64),
    Sum(Vec<(usize, f64)>),
    Random { degree: usize, seed: u64 },
    Conformal(f64),
    Pluri { j: usize, amplitude: f64, phase: f64 },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecError {
    /// `position` is a 0-based byte offset into the spec string.
    #[error("field spec parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("field spec `{spec}` does not apply to the {context}")]
    ContextMismatch { spec: String, context: &'static str },
    #[error("field spec `{spec}`: {source}")]
    Build {
        spec: String,
        #[source]
        source: onofri_core::Error,
    },
}

/// Where a field will live.
#[derive(Clone, Copy)]
pub enum Target<'a> {
    /// `gamma` selects the Sobolev conformal factor for `conformal:<t>`;
    /// without it the logarithmic (MTO) family is used.
    Sphere { ctx: &'a Arc<SphereContext<f64>>, gamma: Option<f64> },
    Cr(&'a Arc<CrContext<f64>>),
}

#[derive(Debug, Clone)]
pub enum Field {
    Zonal(ZonalField<f64>),
    Disk(DiskField<f64>),
}

impl Field {
    pub fn into_zonal(self) -> Option<ZonalField<f64>> {
        match self {
            Field::Zonal(f) => Some(f),
            Field::Disk(_) => None,
        }
    }

    pub fn into_disk(self) -> Option<DiskField<f64>> {
        match self {
            Field::Disk(f) => Some(f),
            Field::Zonal(_) => None,
        }
    }
}

/// Parses `spec` and builds the field on `target`.
pub fn parse_field_spec(spec: &str, target: Target<'_>) -> Result<Field, SpecError> {
    FieldSpec::parse(spec)?.build(spec, target)
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn error(&self, at: usize, message: impl Into<String>) -> SpecError {
        SpecError::Parse {
            position: at,
            message: message.into(),
        }
    }

    /// Next token up to one of `stops` (or the end).
    fn token(&mut self, stops: &[char]) -> (usize, &'a str) {
        let start = self.pos;
        let rest = &self.text[start..];
        let len = rest.find(|c| stops.contains(&c)).unwrap_or(rest.len());
        self.pos += len;
        (start, &rest[..len])
    }

    fn expect(&mut self, c: char) -> Result<(), SpecError> {
        match self.text[self.pos..].chars().next() {
            Some(found) if found == c => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(found) => Err(self.error(self.pos, format!("expected `{c}`, found `{found}`"))),
            None => Err(self.error(self.pos, format!("expected `{c}`, found end of input"))),
        }
    }

    fn at_end(&self) -> bool {
        self.pos == self.text.len()
    }

    fn float(&mut self, what: &str, stops: &[char]) -> Result<f64, SpecError> {
        let (at, tok) = self.token(stops);
        match tok.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(self.error(at, format!("{what} must be a finite number, got `{tok}`"))),
        }
    }

    fn integer<T: std::str::FromStr>(&mut self, what: &str, stops: &[char]) -> Result<T, SpecError> {
        let (at, tok) = self.token(stops);
        tok.parse::<T>()
            .map_err(|_| self.error(at, format!("{what} must be a nonnegative integer, got `{tok}`")))
    }
}

impl FieldSpec {
    pub fn parse(spec: &str) -> Result<Self, SpecError> {
        let mut c = Cursor { text: spec, pos: 0 };
        let (head_at, head) = c.token(&[':']);
        let parsed = match head {
            "const" => {
                c.expect(':')?;
                FieldSpec::Const(c.float("constant", &[])?)
            }
            "mode" => {
                c.expect(':')?;
                let k = c.integer("degree", &[':'])?;
                c.expect(':')?;
                FieldSpec::Mode(k, c.float("amplitude", &[])?)
            }
            "sum" => {
                c.expect(':')?;
                let mut terms = Vec::new();
                loop {
                    let k = c.integer("degree", &[':', ','])?;
                    c.expect(':')?;
                    terms.push((k, c.float("amplitude", &[','])?));
                    if c.at_end() {
                        break;
                    }
                    c.expect(',')?;
                }
                FieldSpec::Sum(terms)
            }
            "random" => {
                c.expect(':')?;
                let degree = c.integer("degree", &[':'])?;
                c.expect(':')?;
                FieldSpec::Random {
                    degree,
                    seed: c.integer("seed", &[])?,
                }
            }
            "conformal" => {
                c.expect(':')?;
                let at = c.pos;
                let t = c.float("t", &[])?;
                if t < 0.0 {
                    return Err(c.error(at, "t must be nonnegative"));
                }
                FieldSpec::Conformal(t)
            }
            "pluri" => {
                c.expect(':')?;
                let j = c.integer("degree", &[':'])?;
                c.expect(':')?;
                let amplitude = c.float("amplitude", &[':'])?;
                c.expect(':')?;
                FieldSpec::Pluri {
                    j,
                    amplitude,
                    phase: c.float("phase", &[])?,
                }
            }
            other => {
                return Err(c.error(
                    head_at,
                    format!("unknown field kind `{other}` (expected const, mode, sum, random, conformal or pluri)"),
                ))
            }
        };
        if !c.at_end() {
            return Err(c.error(c.pos, "unexpected trailing input"));
        }
        Ok(parsed)
    }

    pub fn build(&self, spec: &str, target: Target<'_>) -> Result<Field, SpecError> {
        let built = |r: onofri_core::Result<Field>| {
            r.map_err(|source| SpecError::Build {
                spec: spec.to_owned(),
                source,
            })
        };
        let mismatch = |context| SpecError::ContextMismatch {
            spec: spec.to_owned(),
            context,
        };
        match target {
            Target::Sphere { ctx, gamma } => built(match *self {
                FieldSpec::Const(c) => Ok(ZonalField::constant(ctx, c)),
                FieldSpec::Mode(k, a) => ZonalField::mode(ctx, k, a),
                FieldSpec::Sum(ref terms) => {
                    let mut coeffs = vec![0.0; ctx.degree() + 1];
                    match terms.iter().find(|&&(k, _)| k > ctx.degree()) {
                        Some(&(k, _)) => Err(too_high(k, ctx.degree())),
                        None => {
                            for &(k, a) in terms {
                                coeffs[k] += a;
                            }
                            ZonalField::from_coeffs(ctx, &coeffs)
                        }
                    }
                }
                FieldSpec::Random { degree, seed } => Ok(ZonalField::random(ctx, degree, seed)),
                FieldSpec::Conformal(t) => match gamma {
                    Some(g) => conformal_factor_field(ctx, t, g).map(|c| c.field),
                    None => Ok(ZonalField::project(ctx, |x| -(t.cosh() + t.sinh() * x).ln())),
                },
                FieldSpec::Pluri { .. } => return Err(mismatch("round sphere")),
            }
            .map(Field::Zonal)),
            Target::Cr(ctx) => built(match *self {
                FieldSpec::Const(c) => Ok(DiskField::constant(ctx, c)),
                FieldSpec::Mode(k, a) => {
                    let mut coeffs = vec![0.0; ctx.keys().len()];
                    match coeffs.get_mut(k) {
                        Some(slot) => *slot = a,
                        None => return Err(mismatch_index(spec, k, ctx.keys().len())),
                    }
                    DiskField::from_coeffs(ctx, &coeffs)
                }
                FieldSpec::Sum(ref terms) => {
                    let mut coeffs = vec![0.0; ctx.keys().len()];
                    for &(k, a) in terms {
                        match coeffs.get_mut(k) {
                            Some(slot) => *slot += a,
                            None => return Err(mismatch_index(spec, k, ctx.keys().len())),
                        }
                    }
                    DiskField::from_coeffs(ctx, &coeffs)
                }
                FieldSpec::Random { degree, seed } => Ok(DiskField::random_pluriharmonic(ctx, degree, seed)),
                FieldSpec::Pluri { j, amplitude, phase } => DiskField::pluri(ctx, j, amplitude, phase),
                FieldSpec::Conformal(_) => return Err(mismatch("CR sphere")),
            }
            .map(Field::Disk)),
        }
    }
}

fn too_high(k: usize, degree: usize) -> onofri_core::Error {
    onofri_core::Error::Parameter(format!("mode degree {k} exceeds truncation K = {degree}"))
}

fn mismatch_index(spec: &str, k: usize, len: usize) -> SpecError {
    SpecError::Build {
        spec: spec.to_owned(),
        source: onofri_core::Error::Parameter(format!("basis index {k} is out of range (basis size {len})")),
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Const(c) => write!(f, "const:{c}"),
            FieldSpec::Mode(k, a) => write!(f, "mode:{k}:{a}"),
            FieldSpec::Sum(terms) => {
                f.write_str("sum:")?;
                for (i, (k, a)) in terms.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{k}:{a}")?;
                }
                Ok(())
            }
            FieldSpec::Random { degree, seed } => write!(f, "random:{degree}:{seed}"),
            FieldSpec::Conformal(t) => write!(f, "conformal:{t}"),
            FieldSpec::Pluri { j, amplitude, phase } => write!(f, "pluri:{j}:{amplitude}:{phase}"),
        }
    }
}
