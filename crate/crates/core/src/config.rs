//! Plain-text spec files.
//!
//! ```text
//! # Smale–Williams type solenoid, λ = 0.2
//! [base]
//! m = 2
//!
//! [nu]
//! p = 2
//! lambda = 0.2
//! f0 = 1 : 0.5, 0
//! f1 = 1 : 0, 0.5
//!
//! [psi]
//! d = 1
//! lambda_tilde = 0.1
//! g0 = 1 : 0, 0.25
//!
//! [domain]
//! e_radius = 1
//! f_radius = 0.5
//! ```
//!
//! `lambda`, `theta`, `f<i>` and `g<i>` are scalar trigonometric
//! polynomials given one term per line; a line is either a bare constant or
//! `k1, ..., kl : cos_coeff, sin_coeff`. Every other key must appear exactly
//! once, except `theta` and the term keys, which are optional.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::{SolenoidParams, SolenoidSpec};
use crate::trig::TrigPolynomial;

/// Bumped whenever the accepted grammar changes.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Section {
    Base,
    Nu,
    Psi,
    Domain,
}

impl Section {
    fn parse(name: &str) -> Option<Self> {
        match name {
            "base" => Some(Section::Base),
            "nu" => Some(Section::Nu),
            "psi" => Some(Section::Psi),
            "domain" => Some(Section::Domain),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct TermLine {
    line: usize,
    freq: Option<Vec<i64>>,
    cos: f64,
    sin: f64,
}

#[derive(Default)]
struct Raw {
    scalars: HashMap<&'static str, (usize, String)>,
    terms: HashMap<String, Vec<TermLine>>,
}

const SCALAR_KEYS: [(Section, &str); 6] = [
    (Section::Base, "m"),
    (Section::Nu, "p"),
    (Section::Psi, "d"),
    (Section::Psi, "lambda_tilde"),
    (Section::Domain, "e_radius"),
    (Section::Domain, "f_radius"),
];

fn is_term_key(section: Section, key: &str) -> bool {
    let indexed = |prefix: &str| {
        key.strip_prefix(prefix)
            .is_some_and(|rest| !rest.is_empty() && rest.parse::<usize>().is_ok() && (rest == "0" || !rest.starts_with('0')))
    };
    match section {
        Section::Nu => key == "lambda" || key == "theta" || indexed("f"),
        Section::Psi => indexed("g"),
        _ => false,
    }
}

fn parse_f64(s: &str, line: usize, what: &str) -> Result<f64> {
    let v: f64 = s.trim().parse().map_err(|_| Error::Parse {
        line,
        msg: format!("{what}: expected a number, got '{}'", s.trim()),
    })?;
    if !v.is_finite() {
        return Err(Error::Parse {
            line,
            msg: format!("{what}: non-finite value"),
        });
    }
    Ok(v)
}

fn parse_term(value: &str, line: usize, key: &str) -> Result<TermLine> {
    match value.split_once(':') {
        None => Ok(TermLine {
            line,
            freq: None,
            cos: parse_f64(value, line, key)?,
            sin: 0.0,
        }),
        Some((freq, coeffs)) => {
            let freq = freq
                .split(',')
                .map(|k| {
                    k.trim().parse::<i64>().map_err(|_| Error::Parse {
                        line,
                        msg: format!("{key}: bad frequency '{}'", k.trim()),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let c: Vec<&str> = coeffs.split(',').collect();
            if c.len() != 2 {
                return Err(Error::Parse {
                    line,
                    msg: format!("{key}: expected 'cos_coeff, sin_coeff' after ':'"),
                });
            }
            Ok(TermLine {
                line,
                freq: Some(freq),
                cos: parse_f64(c[0], line, key)?,
                sin: parse_f64(c[1], line, key)?,
            })
        }
    }
}

fn lex(text: &str) -> Result<Raw> {
    let mut raw = Raw::default();
    let mut section: Option<Section> = None;
    for (i, line) in text.lines().enumerate() {
        let n = i + 1;
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name.strip_suffix(']').ok_or_else(|| Error::Parse {
                line: n,
                msg: format!("unterminated section header '{line}'"),
            })?;
            section = Some(Section::parse(name.trim()).ok_or_else(|| Error::Parse {
                line: n,
                msg: format!("unknown section '{}'", name.trim()),
            })?);
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: n,
            msg: format!("expected 'key = value', got '{line}'"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        let sec = section.ok_or_else(|| Error::Parse {
            line: n,
            msg: format!("key '{key}' before any section header"),
        })?;
        if let Some(&(_, name)) = SCALAR_KEYS.iter().find(|(s, k)| *s == sec && *k == key) {
            if raw.scalars.insert(name, (n, value.to_string())).is_some() {
                return Err(Error::Parse {
                    line: n,
                    msg: format!("duplicate key '{key}'"),
                });
            }
        } else if is_term_key(sec, key) {
            let term = parse_term(value, n, key)?;
            raw.terms.entry(key.to_string()).or_default().push(term);
        } else {
            return Err(Error::Parse {
                line: n,
                msg: format!("unknown key '{key}'"),
            });
        }
    }
    Ok(raw)
}

fn required<'a>(raw: &'a Raw, key: &'static str) -> Result<(usize, &'a str)> {
    raw.scalars
        .get(key)
        .map(|(l, v)| (*l, v.as_str()))
        .ok_or_else(|| Error::Parse {
            line: 0,
            msg: format!("missing key '{key}'"),
        })
}

fn parse_usize(raw: &Raw, key: &'static str) -> Result<usize> {
    let (line, v) = required(raw, key)?;
    v.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("{key}: expected a non-negative integer, got '{v}'"),
    })
}

fn build_poly(raw: &Raw, keys: &[String], l: usize) -> Result<TrigPolynomial> {
    let mut poly = TrigPolynomial::zero(l, keys.len());
    for (c, key) in keys.iter().enumerate() {
        for t in raw.terms.get(key).into_iter().flatten() {
            let freq = t.freq.clone().unwrap_or_else(|| vec![0; l]);
            if freq.len() != l {
                return Err(Error::Parse {
                    line: t.line,
                    msg: format!("{key}: {} frequencies for a {l}-dimensional base", freq.len()),
                });
            }
            let mut cos = vec![0.0; keys.len()];
            let mut sin = vec![0.0; keys.len()];
            cos[c] = t.cos;
            sin[c] = t.sin;
            poly.push_term(&freq, &cos, &sin)?;
        }
    }
    Ok(poly)
}

fn check_indices(raw: &Raw, prefix: char, count: usize, owner: &str) -> Result<()> {
    for (key, lines) in &raw.terms {
        if key.starts_with(prefix) && key != "theta" && key != "lambda" {
            let i: usize = key[1..].parse().unwrap_or(usize::MAX);
            if i >= count {
                return Err(Error::Parse {
                    line: lines[0].line,
                    msg: format!("key '{key}' exceeds {owner} = {count}"),
                });
            }
        }
    }
    Ok(())
}

/// Parses a spec file body and validates the result.
pub fn parse_spec(text: &str) -> Result<SolenoidSpec> {
    let raw = lex(text)?;
    let (mline, m) = required(&raw, "m")?;
    let base = m
        .split(',')
        .map(|s| {
            s.trim().parse::<u32>().map_err(|_| Error::Parse {
                line: mline,
                msg: format!("m: bad diagonal entry '{}'", s.trim()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let l = base.len();
    let p = parse_usize(&raw, "p")?;
    let d = parse_usize(&raw, "d")?;
    check_indices(&raw, 'f', p, "p")?;
    check_indices(&raw, 'g', d, "d")?;
    if !raw.terms.contains_key("lambda") {
        return Err(Error::Parse {
            line: 0,
            msg: "missing key 'lambda'".into(),
        });
    }
    let lambda = build_poly(&raw, &["lambda".to_string()], l)?;
    let theta = if raw.terms.contains_key("theta") {
        Some(build_poly(&raw, &["theta".to_string()], l)?)
    } else {
        None
    };
    let f_keys: Vec<String> = (0..p).map(|i| format!("f{i}")).collect();
    let g_keys: Vec<String> = (0..d).map(|i| format!("g{i}")).collect();
    let f = build_poly(&raw, &f_keys, l)?;
    let g = build_poly(&raw, &g_keys, l)?;
    let num = |key: &'static str| -> Result<f64> {
        let (line, v) = required(&raw, key)?;
        parse_f64(v, line, key)
    };
    SolenoidSpec::new(SolenoidParams {
        base,
        p,
        d,
        lambda,
        theta,
        f,
        lambda_tilde: num("lambda_tilde")?,
        g,
        e_radius: num("e_radius")?,
        f_radius: num("f_radius")?,
    })
}

pub fn load_spec(path: &Path) -> Result<SolenoidSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
    parse_spec(&text)
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

fn write_poly(out: &mut String, poly: &TrigPolynomial, name: impl Fn(usize) -> String) {
    for c in 0..poly.arity() {
        for t in poly.terms() {
            let (cos, sin) = (t.cos_coeffs[c], t.sin_coeffs[c]);
            if cos == 0.0 && sin == 0.0 {
                continue;
            }
            let _ = writeln!(out, "{} = {} : {:?}, {:?}", name(c), join(&t.freq), cos, sin);
        }
    }
}

/// Canonical serialization: fixed key order, one term per line, floats in
/// shortest round-trip form. Parsing it back yields an identical spec.
pub fn to_config_string(spec: &SolenoidSpec) -> String {
    let prm = spec.params();
    let mut s = String::new();
    let _ = writeln!(s, "[base]\nm = {}\n", join(&prm.base));
    let _ = writeln!(s, "[nu]\np = {}", prm.p);
    write_poly(&mut s, &prm.lambda, |_| "lambda".into());
    if let Some(theta) = &prm.theta {
        write_poly(&mut s, theta, |_| "theta".into());
    }
    write_poly(&mut s, &prm.f, |c| format!("f{c}"));
    let _ = writeln!(s, "\n[psi]\nd = {}\nlambda_tilde = {:?}", prm.d, prm.lambda_tilde);
    write_poly(&mut s, &prm.g, |c| format!("g{c}"));
    let _ = writeln!(
        s,
        "\n[domain]\ne_radius = {:?}\nf_radius = {:?}",
        prm.e_radius, prm.f_radius
    );
    s
}

/// First 16 hex digits of the SHA-256 of the canonical serialization.
pub fn spec_hash(spec: &SolenoidSpec) -> String {
    let digest = Sha256::digest(to_config_string(spec).as_bytes());
    hex::encode(digest)[..16].to_string()
}
