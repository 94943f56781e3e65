//! The `procat-diagram/1` input format.

use serde::Deserialize;
use std::ops::Range;
use toml::Spanned;

pub const FORMAT: &str = "procat-diagram/1";

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub format: Spanned<String>,
    pub category: Spanned<String>,
    pub depth: Option<usize>,
    pub shape: Option<ShapeSpec>,
    #[serde(default, rename = "object")]
    pub objects: Vec<ObjectSpec>,
    #[serde(default, rename = "map")]
    pub maps: Vec<MapSpec>,
    pub diagram: Option<DiagramSpec>,
    pub tower: Option<TowerSpec>,
    pub commute: Option<CommuteSpec>,
}

/// A finite shape: a poset by Hasse arrows, an explicit category, or one
/// of the named shapes.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapeSpec {
    pub kind: Spanned<String>,
    #[serde(default)]
    pub objects: Vec<String>,
    /// `[lower, upper]` pairs of a poset; arrows point from `lower`.
    #[serde(default)]
    pub hasse: Vec<[Spanned<String>; 2]>,
    /// `[name, source, target]`.
    #[serde(default)]
    pub arrows: Vec<[Spanned<String>; 3]>,
    /// `[g, f, g.f]` by arrow name.
    #[serde(default)]
    pub compose: Vec<[Spanned<String>; 3]>,
    pub size: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum IndexSpec {
    Builtin(String),
    Poset {
        elements: Vec<String>,
        hasse: Vec<[String; 2]>,
    },
}

impl Default for IndexSpec {
    fn default() -> Self {
        IndexSpec::Builtin("nat-tower".into())
    }
}

/// `start + step n`, or `base^(start + step n)` with `base`, capped at `max`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Arith {
    pub start: u64,
    #[serde(default)]
    pub step: u64,
    pub base: Option<u64>,
    pub max: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Family {
    Constant(u64),
    List(Vec<u64>),
    Arith(Arith),
}

impl Family {
    pub fn at(&self, n: usize) -> Result<u64, String> {
        match self {
            Family::Constant(v) => Ok(*v),
            Family::List(v) => v
                .get(n.min(v.len().saturating_sub(1)))
                .copied()
                .ok_or_else(|| "empty level list".to_string()),
            Family::Arith(a) => {
                let v = a
                    .step
                    .checked_mul(n as u64)
                    .and_then(|x| x.checked_add(a.start))
                    .and_then(|e| match a.base {
                        Some(b) => u32::try_from(e).ok().and_then(|e| b.checked_pow(e)),
                        None => Some(e),
                    });
                match (v, a.max) {
                    (Some(v), m) => Ok(m.map_or(v, |m| v.min(m))),
                    (None, Some(m)) => Ok(m),
                    (None, None) => Err("level value overflows".into()),
                }
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Family::Constant(v) => v.to_string(),
            Family::List(v) => format!("{v:?} then constant"),
            Family::Arith(a) => {
                let e = if a.step == 0 {
                    a.start.to_string()
                } else {
                    format!("{} + {} n", a.start, a.step)
                };
                let v = match a.base {
                    Some(b) => format!("{b}^({e})"),
                    None => e,
                };
                match a.max {
                    Some(m) => format!("min({v}, {m})"),
                    None => v,
                }
            }
        }
    }
}

/// Per-level orders of a finite abelian group.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Orders {
    Levels(Vec<Vec<u64>>),
    Cyclic(Family),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Labels {
    pub lo: Family,
    pub hi: Family,
}

/// A named rule or one explicit base map per level, the last repeating.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Rule {
    Named(String),
    Explicit(Vec<Explicit>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Explicit {
    Assign(Vec<usize>),
    Matrix(Vec<Vec<i64>>),
}

impl Rule {
    pub fn describe(&self) -> String {
        match self {
            Rule::Named(s) => s.clone(),
            Rule::Explicit(v) => format!("{} explicit maps then constant", v.len()),
        }
    }

    pub fn explicit(&self, n: usize) -> Option<&Explicit> {
        match self {
            Rule::Named(_) => None,
            Rule::Explicit(v) => v.get(n.min(v.len().saturating_sub(1))),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectSpec {
    pub name: Spanned<String>,
    #[serde(default)]
    pub index: IndexSpec,
    pub sizes: Option<Family>,
    pub orders: Option<Orders>,
    pub labels: Option<Labels>,
    pub structure: Option<Spanned<Rule>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub name: Spanned<String>,
    pub source: Spanned<String>,
    pub target: Spanned<String>,
    #[serde(default)]
    pub delay: usize,
    pub rule: Spanned<Rule>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramSpec {
    pub objects: Vec<Spanned<String>>,
    /// One per generating arrow of the shape, in declaration order.
    #[serde(default)]
    pub maps: Vec<Spanned<String>>,
}

/// `X^0 <- X^1 <- ...`; the last object repeats with identity steps.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerSpec {
    pub objects: Vec<Spanned<String>>,
    #[serde(default)]
    pub steps: Vec<Spanned<String>>,
}

/// A tower of diagrams on `[shape]`: row `a` is a diagram, `steps[a]` maps
/// row `a + 1` to row `a` objectwise. The last row repeats.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommuteSpec {
    pub rows: Vec<Vec<Spanned<String>>>,
    pub row_maps: Vec<Vec<Spanned<String>>>,
    #[serde(default)]
    pub steps: Vec<Vec<Spanned<String>>>,
}

/// A validation error pinned to a byte range of the input.
#[derive(Debug)]
pub struct SpecError {
    pub message: String,
    pub span: Option<Range<usize>>,
}

impl SpecError {
    pub fn at(span: Range<usize>, message: impl Into<String>) -> Self {
        SpecError {
            message: message.into(),
            span: Some(span),
        }
    }

    pub fn plain(message: impl Into<String>) -> Self {
        SpecError {
            message: message.into(),
            span: None,
        }
    }

    pub fn render(&self, path: &str, text: &str) -> String {
        match &self.span {
            Some(r) => {
                let (line, col) = line_col(text, r.start);
                format!("{path}:{line}:{col}: {}", self.message)
            }
            None => format!("{path}: {}", self.message),
        }
    }
}

pub fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, col)
}

pub fn parse(text: &str) -> Result<SpecFile, SpecError> {
    let spec: SpecFile = toml::from_str(text).map_err(|e| SpecError {
        message: e.message().to_string(),
        span: e.span(),
    })?;
    if spec.format.get_ref() != FORMAT {
        return Err(SpecError::at(
            spec.format.span(),
            format!(
                "unsupported format `{}`, expected `{FORMAT}`",
                spec.format.get_ref()
            ),
        ));
    }
    Ok(spec)
}
