//! TOML spec files for mappings and for integrand/measure pairs.
//!
//! ```toml
//! version = 1
//! type = "mapping"
//! dim = 1
//! horizon = 1.0
//!
//! [[pieces]]
//! start = 0.0
//! family = "box"
//! lower = [0.0]
//! upper = [{ affine = [1.0, -1.0] }]
//!
//! [[overrides]]
//! time = 1.0
//! set = { kind = "box", lower = [2.0], upper = [2.0] }
//! ```
//!
//! A coefficient is a number (constant), `{ affine = [a, b] }` for
//! `a + b t`, or a table `{ breakpoints, right, left, terminal }`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use toml::Spanned;

use crate::coefficient::CoefficientFunction;
use crate::convex::{ConvexSet, HPolytope};
use crate::error::{Error, Result};
use crate::integral::{IntegrandKind, NormalIntegrand, RadonMeasure, Target};
use crate::linalg::Point;
use crate::mapping::{Family, Override, Piece, SetValuedMapping};

pub const SPEC_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum Coef {
    Constant(f64),
    Affine {
        affine: [f64; 2],
    },
    Table {
        breakpoints: Vec<f64>,
        right: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        left: Option<Vec<f64>>,
        terminal: f64,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PieceSpec {
    start: f64,
    family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lower: Option<Vec<Coef>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    upper: Option<Vec<Coef>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    center: Option<Vec<Coef>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    radius: Option<Coef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    normals: Option<Vec<Point>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    offsets: Option<Vec<Coef>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OverrideSpec {
    time: f64,
    set: ConvexSet,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MappingBody {
    dim: usize,
    horizon: f64,
    pieces: Vec<Spanned<PieceSpec>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    overrides: Vec<Spanned<OverrideSpec>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MappingFile {
    version: u32,
    #[serde(rename = "type")]
    kind: String,
    dim: usize,
    horizon: f64,
    pieces: Vec<Spanned<PieceSpec>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    overrides: Vec<Spanned<OverrideSpec>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum IntegrandBody {
    QuadraticTracking {
        target: Vec<Coef>,
        #[serde(default = "zero")]
        offset: Coef,
    },
    LinearOnDomain {
        q: Vec<Coef>,
    },
    IndicatorPlus {
        quadratic: Vec<Vec<f64>>,
        linear: Vec<Coef>,
        #[serde(default = "zero")]
        constant: Coef,
    },
}

fn zero() -> Coef {
    Coef::Constant(0.0)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasureBody {
    breakpoints: Vec<f64>,
    density: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    atoms: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IntegrandFile {
    version: u32,
    #[serde(rename = "type")]
    kind: String,
    domain: MappingBody,
    integrand: IntegrandBody,
    measure: Spanned<MeasureBody>,
}

/// An integrand together with its measure.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegrandSpec {
    pub integrand: NormalIntegrand,
    pub measure: RadonMeasure,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Spec {
    Mapping(SetValuedMapping),
    Integrand(IntegrandSpec),
}

fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

fn parse_error(text: &str, e: toml::de::Error) -> Error {
    let (line, column) = e.span().map_or((1, 1), |s| position(text, s.start));
    Error::Parse {
        line,
        column,
        message: e.message().to_string(),
    }
}

/// Validation failures name the offending entry and its line.
struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    fn at(&self, span: std::ops::Range<usize>, what: impl std::fmt::Display) -> String {
        format!("{what} (line {})", position(self.text, span.start).0)
    }
}

fn coefficient(c: &Coef, horizon: f64, context: &str) -> Result<CoefficientFunction> {
    match c {
        Coef::Constant(v) => Ok(CoefficientFunction::constant(*v, horizon)),
        Coef::Affine { affine: [a, b] } => Ok(CoefficientFunction::affine(*a, *b, horizon)),
        Coef::Table {
            breakpoints,
            right,
            left,
            terminal,
        } => {
            let left = left
                .clone()
                .ok_or_else(|| Error::validation(context, "left values are missing"))?;
            if breakpoints.last() != Some(&horizon) {
                return Err(Error::validation(context, format!("breakpoints must end at the horizon {horizon}")));
            }
            CoefficientFunction::new(breakpoints.clone(), right.clone(), left, *terminal).map_err(|e| Error::validation(context, e.to_string()))
        }
    }
}

fn coefficients(cs: &[Coef], horizon: f64, context: &str) -> Result<Vec<CoefficientFunction>> {
    cs.iter()
        .enumerate()
        .map(|(i, c)| coefficient(c, horizon, &format!("{context}[{i}]")))
        .collect()
}

fn constants(cs: &[Coef], context: &str) -> Result<Point> {
    cs.iter()
        .enumerate()
        .map(|(i, c)| match c {
            Coef::Constant(v) => Ok(*v),
            _ => Err(Error::validation(format!("{context}[{i}]"), "polytope bounds must be numbers")),
        })
        .collect()
}

fn table(f: &CoefficientFunction) -> Coef {
    Coef::Table {
        breakpoints: f.breakpoints.clone(),
        right: f.right.clone(),
        left: Some(f.left.clone()),
        terminal: f.terminal,
    }
}

fn family(p: &PieceSpec, horizon: f64, context: &str) -> Result<Family> {
    let need = |field: &str| Error::validation(context, format!("family `{}` needs `{field}`", p.family));
    let fields: [(&str, bool); 6] = [
        ("lower", p.lower.is_some()),
        ("upper", p.upper.is_some()),
        ("center", p.center.is_some()),
        ("radius", p.radius.is_some()),
        ("normals", p.normals.is_some()),
        ("offsets", p.offsets.is_some()),
    ];
    let allowed: &[&str] = match p.family.as_str() {
        "box" => &["lower", "upper"],
        "ball" => &["center", "radius"],
        "polytope" => &["lower", "upper", "normals", "offsets"],
        "oscillator" => &[],
        other => return Err(Error::validation(context, format!("unknown family `{other}`"))),
    };
    if let Some((name, _)) = fields.iter().find(|(n, set)| *set && !allowed.contains(n)) {
        return Err(Error::validation(context, format!("family `{}` does not take `{name}`", p.family)));
    }
    Ok(match p.family.as_str() {
        "box" => Family::Box {
            lower: coefficients(p.lower.as_ref().ok_or_else(|| need("lower"))?, horizon, &format!("{context}.lower"))?,
            upper: coefficients(p.upper.as_ref().ok_or_else(|| need("upper"))?, horizon, &format!("{context}.upper"))?,
        },
        "ball" => Family::Ball {
            center: coefficients(p.center.as_ref().ok_or_else(|| need("center"))?, horizon, &format!("{context}.center"))?,
            radius: coefficient(p.radius.as_ref().ok_or_else(|| need("radius"))?, horizon, &format!("{context}.radius"))?,
        },
        "polytope" => Family::Polytope {
            normals: p.normals.clone().ok_or_else(|| need("normals"))?,
            offsets: coefficients(p.offsets.as_ref().ok_or_else(|| need("offsets"))?, horizon, &format!("{context}.offsets"))?,
            lower: constants(p.lower.as_ref().ok_or_else(|| need("lower"))?, &format!("{context}.lower"))?,
            upper: constants(p.upper.as_ref().ok_or_else(|| need("upper"))?, &format!("{context}.upper"))?,
        },
        _ => Family::Oscillator,
    })
}

fn override_set(set: &ConvexSet) -> Result<ConvexSet> {
    match set {
        ConvexSet::Polytope(p) => Ok(ConvexSet::Polytope(HPolytope::new(
            p.normals.clone(),
            p.offsets.clone(),
            p.lower.clone(),
            p.upper.clone(),
        )?)),
        ConvexSet::Box { lower, upper } => ConvexSet::boxed(lower.clone(), upper.clone()),
        ConvexSet::Ball { center, radius } => ConvexSet::ball(center.clone(), *radius),
    }
}

fn build_mapping(body: &MappingBody, ctx: &Ctx) -> Result<SetValuedMapping> {
    if body.pieces.is_empty() {
        return Err(Error::validation("mapping", "the pieces list is empty"));
    }
    if !(body.horizon.is_finite() && body.horizon > 0.0) {
        return Err(Error::validation("mapping", "horizon must be positive"));
    }
    let mut pieces = Vec::with_capacity(body.pieces.len());
    for (i, p) in body.pieces.iter().enumerate() {
        let context = ctx.at(p.span(), format_args!("pieces[{i}]"));
        pieces.push(Piece {
            start: p.get_ref().start,
            family: family(p.get_ref(), body.horizon, &context)?,
        });
    }
    let mut overrides = Vec::with_capacity(body.overrides.len());
    for (i, o) in body.overrides.iter().enumerate() {
        let context = ctx.at(o.span(), format_args!("overrides[{i}]"));
        overrides.push(Override {
            time: o.get_ref().time,
            set: override_set(&o.get_ref().set).map_err(|e| Error::validation(&context, e.to_string()))?,
        });
    }
    SetValuedMapping::new(body.dim, body.horizon, pieces, overrides).map_err(|e| match e {
        Error::Validation { .. } | Error::Dimension { .. } => e,
        other => Error::validation("mapping", other.to_string()),
    })
}

fn check_header(version: u32, kind: &str, expected: &str) -> Result<()> {
    if version != SPEC_VERSION {
        return Err(Error::validation("spec", format!("unsupported version {version}")));
    }
    if kind != expected {
        return Err(Error::validation("spec", format!("expected type `{expected}`, found `{kind}`")));
    }
    Ok(())
}

pub fn parse_mapping(text: &str) -> Result<SetValuedMapping> {
    let file: MappingFile = toml::from_str(text).map_err(|e| parse_error(text, e))?;
    check_header(file.version, &file.kind, "mapping")?;
    let body = MappingBody {
        dim: file.dim,
        horizon: file.horizon,
        pieces: file.pieces,
        overrides: file.overrides,
    };
    build_mapping(&body, &Ctx { text })
}

pub fn parse_integrand(text: &str) -> Result<IntegrandSpec> {
    let file: IntegrandFile = toml::from_str(text).map_err(|e| parse_error(text, e))?;
    check_header(file.version, &file.kind, "integrand")?;
    let ctx = Ctx { text };
    let domain = build_mapping(&file.domain, &ctx)?;
    let horizon = domain.horizon;
    let kind = match &file.integrand {
        IntegrandBody::QuadraticTracking { target, offset } => IntegrandKind::QuadraticTracking {
            target: Target::Coefficients(coefficients(target, horizon, "integrand.target")?),
            offset: coefficient(offset, horizon, "integrand.offset")?,
        },
        IntegrandBody::LinearOnDomain { q } => IntegrandKind::LinearOnDomain {
            q: coefficients(q, horizon, "integrand.q")?,
        },
        IntegrandBody::IndicatorPlus {
            quadratic,
            linear,
            constant,
        } => IntegrandKind::IndicatorPlus {
            quadratic: quadratic.clone(),
            linear: coefficients(linear, horizon, "integrand.linear")?,
            constant: coefficient(constant, horizon, "integrand.constant")?,
        },
    };
    let integrand = NormalIntegrand::new(kind, domain)?;
    let m = file.measure.get_ref();
    let measure = RadonMeasure::new(m.breakpoints.clone(), m.density.clone(), m.atoms.clone())
        .map_err(|e| Error::validation(ctx.at(file.measure.span(), "measure"), e.to_string()))?;
    if (measure.horizon() - horizon).abs() > 1e-12 * horizon.max(1.0) {
        return Err(Error::validation(
            ctx.at(file.measure.span(), "measure"),
            "the measure horizon differs from the domain",
        ));
    }
    Ok(IntegrandSpec { integrand, measure })
}

/// Dispatches on the `type` key.
pub fn parse_spec(text: &str) -> Result<Spec> {
    #[derive(Deserialize)]
    struct Header {
        #[serde(rename = "type")]
        kind: String,
    }
    let header: Header = toml::from_str::<toml::Table>(text)
        .map_err(|e| parse_error(text, e))
        .and_then(|t| {
            toml::Value::Table(t)
                .try_into()
                .map_err(|e: toml::de::Error| Error::validation("spec", e.message().to_string()))
        })?;
    match header.kind.as_str() {
        "mapping" => parse_mapping(text).map(Spec::Mapping),
        "integrand" => parse_integrand(text).map(Spec::Integrand),
        other => Err(Error::validation("spec", format!("unknown type `{other}`"))),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn read_spec(path: &Path) -> Result<Spec> {
    parse_spec(&read(path)?)
}

pub fn read_mapping(path: &Path) -> Result<SetValuedMapping> {
    parse_mapping(&read(path)?)
}

pub fn read_integrand(path: &Path) -> Result<IntegrandSpec> {
    parse_integrand(&read(path)?)
}

fn mapping_body(m: &SetValuedMapping) -> MappingBody {
    let pieces = m
        .pieces
        .iter()
        .map(|p| {
            let mut s = PieceSpec {
                start: p.start,
                family: p.family.kind().to_string(),
                lower: None,
                upper: None,
                center: None,
                radius: None,
                normals: None,
                offsets: None,
            };
            match &p.family {
                Family::Box { lower, upper } => {
                    s.lower = Some(lower.iter().map(table).collect());
                    s.upper = Some(upper.iter().map(table).collect());
                }
                Family::Ball { center, radius } => {
                    s.center = Some(center.iter().map(table).collect());
                    s.radius = Some(table(radius));
                }
                Family::Polytope {
                    normals,
                    offsets,
                    lower,
                    upper,
                } => {
                    s.normals = Some(normals.clone());
                    s.offsets = Some(offsets.iter().map(table).collect());
                    s.lower = Some(lower.iter().map(|&v| Coef::Constant(v)).collect());
                    s.upper = Some(upper.iter().map(|&v| Coef::Constant(v)).collect());
                }
                Family::Oscillator => {}
            }
            Spanned::new(0..0, s)
        })
        .collect();
    let overrides = m
        .overrides
        .iter()
        .map(|o| {
            let set = match &o.set {
                ConvexSet::Polytope(p) => ConvexSet::Polytope(HPolytope {
                    feasible: None,
                    ..p.clone()
                }),
                s => s.clone(),
            };
            Spanned::new(0..0, OverrideSpec { time: o.time, set })
        })
        .collect();
    MappingBody {
        dim: m.dim,
        horizon: m.horizon,
        pieces,
        overrides,
    }
}

fn to_toml<T: Serialize>(value: &T) -> Result<String> {
    toml::to_string(value).map_err(|e| Error::Io(e.to_string()))
}

pub fn emit_mapping(m: &SetValuedMapping) -> Result<String> {
    let body = mapping_body(m);
    to_toml(&MappingFile {
        version: SPEC_VERSION,
        kind: "mapping".into(),
        dim: body.dim,
        horizon: body.horizon,
        pieces: body.pieces,
        overrides: body.overrides,
    })
}

pub fn emit_integrand(spec: &IntegrandSpec) -> Result<String> {
    let integrand = match &spec.integrand.kind {
        IntegrandKind::QuadraticTracking { target, offset } => match target {
            Target::Coefficients(c) => IntegrandBody::QuadraticTracking {
                target: c.iter().map(table).collect(),
                offset: table(offset),
            },
            Target::Path(_) => {
                return Err(Error::Unsupported("a path target cannot be written to a spec file".into()))
            }
        },
        IntegrandKind::LinearOnDomain { q } => IntegrandBody::LinearOnDomain {
            q: q.iter().map(table).collect(),
        },
        IntegrandKind::IndicatorPlus {
            quadratic,
            linear,
            constant,
        } => IntegrandBody::IndicatorPlus {
            quadratic: quadratic.clone(),
            linear: linear.iter().map(table).collect(),
            constant: table(constant),
        },
    };
    to_toml(&IntegrandFile {
        version: SPEC_VERSION,
        kind: "integrand".into(),
        domain: mapping_body(&spec.integrand.domain),
        integrand,
        measure: Spanned::new(
            0..0,
            MeasureBody {
                breakpoints: spec.measure.breakpoints.clone(),
                density: spec.measure.density.clone(),
                atoms: spec.measure.atoms.clone(),
            },
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const REMARK: &str = r#"
version = 1
type = "mapping"
dim = 1
horizon = 1.0

[[pieces]]
start = 0.0
family = "box"
lower = [0.0]
upper = [{ affine = [1.0, -1.0] }]

[[overrides]]
time = 1.0
set = { kind = "box", lower = [2.0], upper = [2.0] }
"#;

    #[test]
    fn parses_remark_mapping() {
        assert_eq!(parse_mapping(REMARK).unwrap(), fixtures::remark_2_5());
    }

    #[test]
    fn round_trip_all_fixtures() {
        for (name, m) in fixtures::all() {
            let text = emit_mapping(&m).unwrap();
            let back = parse_mapping(&text).unwrap_or_else(|e| panic!("{name}: {e}\n{text}"));
            assert_eq!(back, m, "{name}");
        }
    }

    #[test]
    fn empty_pieces_is_a_validation_error() {
        let text = "version = 1\ntype = \"mapping\"\ndim = 1\nhorizon = 1.0\npieces = []\n";
        assert!(matches!(parse_mapping(text), Err(Error::Validation { .. })));
    }

    #[test]
    fn missing_left_values_is_a_validation_error() {
        let text = REMARK.replace(
            "upper = [{ affine = [1.0, -1.0] }]",
            "upper = [{ breakpoints = [0.0, 0.5, 1.0], right = [1.0, 2.0], terminal = 2.0 }]",
        );
        match parse_mapping(&text) {
            Err(Error::Validation { context, message }) => {
                assert!(context.contains("line 7"), "{context}");
                assert!(message.contains("left"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_a_line() {
        let text = REMARK.replace("dim = 1", "dim = = 1");
        match parse_mapping(&text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn integrand_round_trip() {
        let text = r#"
version = 1
type = "integrand"

[domain]
dim = 1
horizon = 1.0

[[domain.pieces]]
start = 0.0
family = "box"
lower = [{ affine = [0.0, 1.0] }]
upper = [2.0]

[integrand]
kind = "linear_on_domain"
q = [1.0]

[measure]
breakpoints = [0.0, 1.0]
density = [1.0]
atoms = [[0.5, 1.0]]
"#;
        let spec = parse_integrand(text).unwrap();
        assert_eq!(spec.measure.atoms, vec![(0.5, 1.0)]);
        let again = parse_integrand(&emit_integrand(&spec).unwrap()).unwrap();
        assert_eq!(again, spec);
        assert!(matches!(parse_spec(text).unwrap(), Spec::Integrand(_)));
    }
}
