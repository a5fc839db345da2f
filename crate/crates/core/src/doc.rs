//! Declarative JSON documents describing objects: vector fields, test maps,
//! kernels, distributions, functionals, icons and microcubes.
//!
//! Documents carry exact rationals as `[num, den]` pairs. The same encoding
//! is used for the reproduction data embedded in reports, so a failing
//! instance can be parsed back and replayed.
//!
//! ```json
//! { "schema": 1,
//!   "fields": { "f": [[{"c": [1, 1], "e": [0, 1]}], []] },
//!   "kernels": { "K": {"p": 1, "dim": 2,
//!                      "entries": [{"component": 0, "slots": [0], "poly": [{"c": [1, 1], "e": [0, 0]}]}]} } }
//! ```

use serde_json::{json, Map, Value};

use crate::distributions::{CompactDistribution, DiracFlow};
use crate::error::{Error, Result};
use crate::forms::{Kernel, Semiform};
use crate::functional::{DerivTerm, Domain, Factor, Functional, Kind};
use crate::icon::Icon;
use crate::microcube::{subset, subset_indices, Microcube};
use crate::poly::{Component, Polynomial, TestMap};
use crate::scalar::{Elementary, Rational, Scalar};
use crate::weil::{point_add, Point, Weil};

pub const SCHEMA: u64 = 1;

type Q = Rational;

/// A functional on a Euclidean domain, as data.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionalSpec {
    /// `h ↦ h(at)`.
    Dirac { base: Vec<Q>, dim: usize, at: Vec<Q> },
    /// `h ↦ Σ w·∂^α h(x)`.
    Derivative {
        base: Vec<Q>,
        dim: usize,
        terms: Vec<DerivTerm<Q>>,
    },
    /// `h ↦ post(h(at)) + Σ w·∂^α h(x)`, not linear in `h`.
    PointPolynomial {
        base: Vec<Q>,
        at: Vec<Q>,
        post: TestMap<Q>,
        terms: Vec<DerivTerm<Q>>,
    },
}

impl FunctionalSpec {
    pub fn domain(&self) -> Domain {
        match self {
            FunctionalSpec::Dirac { base, .. }
            | FunctionalSpec::Derivative { base, .. }
            | FunctionalSpec::PointPolynomial { base, .. } => Domain::euclidean(base.clone()),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            FunctionalSpec::Dirac { dim, .. } | FunctionalSpec::Derivative { dim, .. } => *dim,
            FunctionalSpec::PointPolynomial { post, .. } => post.target(),
        }
    }

    pub fn build<S: Scalar>(&self) -> Result<Functional<S>> {
        let domain = self.domain();
        let m = self.dim();
        match self {
            FunctionalSpec::Dirac { at, .. } => Functional::dirac(domain, m, lift_point(at)),
            FunctionalSpec::Derivative { terms, .. } => {
                Functional::derivative_combo(domain, m, convert_terms(terms))
            }
            FunctionalSpec::PointPolynomial { at, post, terms, .. } => {
                if post.nvars() != m {
                    return Err(Error::DimensionMismatch {
                        context: "point-polynomial post map".into(),
                        expected: m,
                        found: post.nvars(),
                    });
                }
                let at: Point<S> = lift_point(at);
                if at.len() != domain.dim() {
                    return Err(Error::DimensionMismatch {
                        context: "point-polynomial evaluation point".into(),
                        expected: domain.dim(),
                        found: at.len(),
                    });
                }
                let post: TestMap<S> = post.map_scalars(S::from_rational);
                let u = Functional::derivative_combo(domain.clone(), m, convert_terms(terms))?;
                Ok(Functional::custom(domain, m, Kind::Custom, move |ctx, h| {
                    let y = post.eval(&h(&at)?)?;
                    Ok(point_add(&y, &u.eval(ctx, h)?))
                }))
            }
        }
    }
}

/// A 1- or 2-icon, as data.
#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum IconSpec {
    /// `ξ(d)(h) = h() + d·f(h())` on the terminal domain.
    VectorField(TestMap<Q>),
    /// Kernel semiform over `D^p`.
    Kernel(Kernel<Q>),
    /// `ξ(d) = δ_{base + d·velocity}`.
    DiracCurve {
        base: Vec<Q>,
        dim: usize,
        velocity: Vec<Q>,
    },
    /// `ξ(d) = δ_base + d·Σ w·∂^α`.
    DerivativeFlow {
        base: Vec<Q>,
        dim: usize,
        terms: Vec<DerivTerm<Q>>,
    },
    /// 2-icon `δ + d₁u₁ + d₂u₂ + d₁d₂u₁₂`.
    AffineSquare {
        u1: FunctionalSpec,
        u2: FunctionalSpec,
        u12: FunctionalSpec,
    },
    /// Dirac flow `δ + d·u` of a real-valued distribution.
    DiracFlow(CompactDistribution<Q>),
    /// Dirac flow `δ_{base + d·velocity}` of point evaluations.
    PointFlow { base: Vec<Q>, velocity: Vec<Q> },
}

impl IconSpec {
    pub fn family(&self) -> &'static str {
        match self {
            IconSpec::VectorField(_) => "vector-field",
            IconSpec::Kernel(_) => "kernel",
            IconSpec::DiracCurve { .. } => "dirac-curve",
            IconSpec::DerivativeFlow { .. } => "derivative-flow",
            IconSpec::AffineSquare { .. } => "affine-square",
            IconSpec::DiracFlow(_) => "dirac-flow",
            IconSpec::PointFlow { .. } => "point-flow",
        }
    }

    /// Dimension of the icon's parameter domain.
    pub fn domain_dim(&self) -> usize {
        match self {
            IconSpec::VectorField(_) => 0,
            IconSpec::Kernel(k) => k.degree(),
            IconSpec::DiracCurve { base, .. }
            | IconSpec::DerivativeFlow { base, .. }
            | IconSpec::PointFlow { base, .. } => base.len(),
            IconSpec::AffineSquare { u1, .. } => u1.domain().dim(),
            IconSpec::DiracFlow(u) => u.domain().dim(),
        }
    }

    /// Target dimension of the icon.
    pub fn target(&self) -> usize {
        match self {
            IconSpec::VectorField(f) => f.target(),
            IconSpec::Kernel(k) => k.dim(),
            IconSpec::DiracCurve { dim, .. } | IconSpec::DerivativeFlow { dim, .. } => *dim,
            IconSpec::AffineSquare { u1, .. } => u1.dim(),
            IconSpec::DiracFlow(_) | IconSpec::PointFlow { .. } => 1,
        }
    }

    pub fn build<S: Scalar>(&self) -> Result<Icon<S>> {
        match self {
            IconSpec::VectorField(f) => Icon::vector_field(f.map_scalars(S::from_rational)),
            IconSpec::Kernel(k) => Ok(Semiform::from_kernel(k.map_scalars(S::from_rational)).icon().clone()),
            IconSpec::DiracCurve { base, dim, velocity } => Icon::dirac_curve(
                Domain::euclidean(base.clone()),
                *dim,
                velocity.iter().map(S::from_rational).collect(),
            ),
            IconSpec::DerivativeFlow { base, dim, terms } => {
                Icon::derivative_flow(Domain::euclidean(base.clone()), *dim, convert_terms(terms))
            }
            IconSpec::AffineSquare { u1, u2, u12 } => Icon::affine_square(u1.build()?, u2.build()?, u12.build()?),
            IconSpec::DiracFlow(_) | IconSpec::PointFlow { .. } => Ok(self.build_flow()?.icon().clone()),
        }
    }

    /// The Dirac flow of a `dirac-flow` or `point-flow` spec.
    pub fn build_flow<S: Scalar>(&self) -> Result<DiracFlow<S>> {
        match self {
            IconSpec::DiracFlow(u) => Ok(DiracFlow::new(u.map_scalars(S::from_rational)?)),
            IconSpec::PointFlow { base, velocity } => DiracFlow::point_flow(
                Domain::euclidean(base.clone()),
                velocity.iter().map(S::from_rational).collect(),
            ),
            other => Err(Error::Parse {
                path: "icon".into(),
                message: format!("family `{}` is not a Dirac flow", other.family()),
            }),
        }
    }
}

fn lift_point<S: Scalar>(x: &[Q]) -> Point<S> {
    x.iter().map(|c| Weil::constant(S::from_rational(c))).collect()
}

pub fn convert_terms<S: Scalar>(terms: &[DerivTerm<Q>]) -> Vec<DerivTerm<S>> {
    terms
        .iter()
        .map(|t| DerivTerm {
            weight: S::from_rational(&t.weight),
            point: t.point.iter().map(S::from_rational).collect(),
            orders: t.orders.clone(),
        })
        .collect()
}

/// A parsed document. Named references (`"field": "f"`) are resolved while
/// parsing; emission always writes objects inline.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct InputDoc {
    pub fields: Vec<(String, TestMap<Q>)>,
    pub test_maps: Vec<(String, TestMap<Q>)>,
    pub kernels: Vec<(String, Kernel<Q>)>,
    pub distributions: Vec<(String, CompactDistribution<Q>)>,
    pub functionals: Vec<(String, FunctionalSpec)>,
    pub icons: Vec<(String, IconSpec)>,
    pub microcubes: Vec<(String, Microcube<Q>)>,
}

fn perr(path: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_string(),
        message: message.into(),
    }
}

fn lookup<'a, T>(list: &'a [(String, T)], name: &str) -> Option<&'a T> {
    list.iter().find(|(n, _)| n == name).map(|(_, v)| v)
}

impl InputDoc {
    /// Parses document text; syntax errors report line and column.
    pub fn parse(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| {
            perr(
                "$",
                format!("syntax error at line {}, column {}: {e}", e.line(), e.column()),
            )
        })?;
        Self::from_value(&v)
    }

    pub fn from_value(v: &Value) -> Result<Self> {
        let top = v.as_object().ok_or_else(|| perr("$", "expected an object"))?;
        if let Some(s) = top.get("schema") {
            if s.as_u64() != Some(SCHEMA) {
                return Err(perr("schema", format!("unsupported schema {s}, expected {SCHEMA}")));
            }
        }
        const KNOWN: [&str; 8] = [
            "schema",
            "fields",
            "test_maps",
            "kernels",
            "distributions",
            "functionals",
            "icons",
            "microcubes",
        ];
        if let Some(k) = top.keys().find(|k| !KNOWN.contains(&k.as_str())) {
            return Err(perr(k, "unknown section"));
        }
        let mut doc = InputDoc::default();
        for (name, val) in section(top, "fields")? {
            let path = format!("fields.{name}");
            doc.fields.push((name.clone(), parse_field(val, &path)?));
        }
        for (name, val) in section(top, "test_maps")? {
            let path = format!("test_maps.{name}");
            doc.test_maps.push((name.clone(), parse_test_map(val, &path)?));
        }
        for (name, val) in section(top, "kernels")? {
            let path = format!("kernels.{name}");
            doc.kernels.push((name.clone(), parse_kernel(val, &path)?));
        }
        for (name, val) in section(top, "distributions")? {
            let path = format!("distributions.{name}");
            doc.distributions.push((name.clone(), parse_distribution(val, &path)?));
        }
        for (name, val) in section(top, "functionals")? {
            let path = format!("functionals.{name}");
            doc.functionals.push((name.clone(), parse_functional(val, &path)?));
        }
        for (name, val) in section(top, "icons")? {
            let path = format!("icons.{name}");
            let icon = doc.parse_icon(val, &path)?;
            doc.icons.push((name.clone(), icon));
        }
        for (name, val) in section(top, "microcubes")? {
            let path = format!("microcubes.{name}");
            doc.microcubes.push((name.clone(), parse_microcube(val, &path)?));
        }
        Ok(doc)
    }

    pub fn to_json(&self) -> Value {
        let mut top = Map::new();
        top.insert("schema".into(), json!(SCHEMA));
        let mut put = |key: &str, entries: Vec<(String, Value)>| {
            if !entries.is_empty() {
                top.insert(key.into(), Value::Object(entries.into_iter().collect()));
            }
        };
        put("fields", self.fields.iter().map(|(n, f)| (n.clone(), field_json(f))).collect());
        put("test_maps", self.test_maps.iter().map(|(n, f)| (n.clone(), test_map_json(f))).collect());
        put("kernels", self.kernels.iter().map(|(n, k)| (n.clone(), kernel_json(k))).collect());
        put(
            "distributions",
            self.distributions.iter().map(|(n, u)| (n.clone(), distribution_json(u))).collect(),
        );
        put(
            "functionals",
            self.functionals.iter().map(|(n, f)| (n.clone(), functional_json(f))).collect(),
        );
        put("icons", self.icons.iter().map(|(n, i)| (n.clone(), icon_json(i))).collect());
        put(
            "microcubes",
            self.microcubes.iter().map(|(n, c)| (n.clone(), microcube_json(c))).collect(),
        );
        Value::Object(top)
    }

    pub fn field(&self, name: &str) -> Option<&TestMap<Q>> {
        lookup(&self.fields, name)
    }

    pub fn kernel(&self, name: &str) -> Option<&Kernel<Q>> {
        lookup(&self.kernels, name)
    }

    pub fn distribution(&self, name: &str) -> Option<&CompactDistribution<Q>> {
        lookup(&self.distributions, name)
    }

    pub fn icon(&self, name: &str) -> Option<&IconSpec> {
        lookup(&self.icons, name)
    }

    fn parse_icon(&self, v: &Value, path: &str) -> Result<IconSpec> {
        let o = obj(v, path)?;
        let family = get_str(o, "family", path)?;
        let at = |k: &str| format!("{path}.{k}");
        let spec = match family {
            "vector-field" => {
                let f = match o.get("field") {
                    Some(Value::String(name)) => self
                        .field(name)
                        .cloned()
                        .ok_or_else(|| perr(&at("field"), format!("no field named `{name}`")))?,
                    Some(val) => parse_field(val, &at("field"))?,
                    None => return Err(perr(path, "missing `field`")),
                };
                IconSpec::VectorField(f)
            }
            "kernel" => {
                let k = match o.get("kernel") {
                    Some(Value::String(name)) => self
                        .kernel(name)
                        .cloned()
                        .ok_or_else(|| perr(&at("kernel"), format!("no kernel named `{name}`")))?,
                    Some(val) => parse_kernel(val, &at("kernel"))?,
                    None => return Err(perr(path, "missing `kernel`")),
                };
                IconSpec::Kernel(k)
            }
            "dirac-curve" => {
                let base = rationals(field_of(o, "base", path)?, &at("base"))?;
                let velocity = rationals(field_of(o, "velocity", path)?, &at("velocity"))?;
                let dim = get_usize(o, "dim", path)?;
                if base.len() != velocity.len() {
                    return Err(perr(&at("velocity"), format!("expected {} entries", base.len())));
                }
                IconSpec::DiracCurve { base, dim, velocity }
            }
            "derivative-flow" => {
                let base = rationals(field_of(o, "base", path)?, &at("base"))?;
                let dim = get_usize(o, "dim", path)?;
                let terms = parse_terms(field_of(o, "terms", path)?, base.len(), &at("terms"))?;
                IconSpec::DerivativeFlow { base, dim, terms }
            }
            "affine-square" => {
                let u1 = self.functional_ref(field_of(o, "u1", path)?, &at("u1"))?;
                let u2 = self.functional_ref(field_of(o, "u2", path)?, &at("u2"))?;
                let u12 = self.functional_ref(field_of(o, "u12", path)?, &at("u12"))?;
                for (u, k) in [(&u2, "u2"), (&u12, "u12")] {
                    if u.domain() != u1.domain() || u.dim() != u1.dim() {
                        return Err(perr(&at(k), "domain or dimension differs from u1"));
                    }
                }
                IconSpec::AffineSquare { u1, u2, u12 }
            }
            "dirac-flow" => {
                let u = match o.get("distribution") {
                    Some(Value::String(name)) => self.distribution(name).cloned().ok_or_else(|| {
                        perr(&at("distribution"), format!("no distribution named `{name}`"))
                    })?,
                    Some(val) => parse_distribution(val, &at("distribution"))?,
                    None => return Err(perr(path, "missing `distribution`")),
                };
                IconSpec::DiracFlow(u)
            }
            "point-flow" => {
                let base = rationals(field_of(o, "base", path)?, &at("base"))?;
                let velocity = rationals(field_of(o, "velocity", path)?, &at("velocity"))?;
                if base.len() != velocity.len() {
                    return Err(perr(&at("velocity"), format!("expected {} entries", base.len())));
                }
                IconSpec::PointFlow { base, velocity }
            }
            other => return Err(perr(&at("family"), format!("unknown icon family `{other}`"))),
        };
        Ok(spec)
    }

    fn functional_ref(&self, v: &Value, path: &str) -> Result<FunctionalSpec> {
        match v {
            Value::String(name) => lookup(&self.functionals, name)
                .cloned()
                .ok_or_else(|| perr(path, format!("no functional named `{name}`"))),
            other => parse_functional(other, path),
        }
    }
}

fn section<'a>(top: &'a Map<String, Value>, key: &str) -> Result<Vec<(&'a String, &'a Value)>> {
    match top.get(key) {
        None => Ok(Vec::new()),
        Some(Value::Object(m)) => Ok(m.iter().collect()),
        Some(_) => Err(perr(key, "expected an object of named entries")),
    }
}

fn obj<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| perr(path, "expected an object"))
}

fn arr<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| perr(path, "expected an array"))
}

fn field_of<'a>(o: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    o.get(key).ok_or_else(|| perr(path, format!("missing `{key}`")))
}

fn get_str<'a>(o: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a str> {
    field_of(o, key, path)?
        .as_str()
        .ok_or_else(|| perr(&format!("{path}.{key}"), "expected a string"))
}

fn get_usize(o: &Map<String, Value>, key: &str, path: &str) -> Result<usize> {
    field_of(o, key, path)?
        .as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| perr(&format!("{path}.{key}"), "expected a non-negative integer"))
}

fn rational(v: &Value, path: &str) -> Result<Q> {
    Q::from_json(v).map_err(|m| perr(path, m))
}

fn rationals(v: &Value, path: &str) -> Result<Vec<Q>> {
    arr(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| rational(x, &format!("{path}[{i}]")))
        .collect()
}

fn indices(v: &Value, path: &str) -> Result<Vec<u64>> {
    arr(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| {
            x.as_u64()
                .ok_or_else(|| perr(&format!("{path}[{i}]"), "expected a non-negative integer"))
        })
        .collect()
}

fn rationals_json(v: &[Q]) -> Value {
    Value::Array(v.iter().map(Q::to_json).collect())
}

fn parse_poly(v: &Value, nvars: usize, path: &str) -> Result<Polynomial<Q>> {
    let mut terms = Vec::new();
    for (i, t) in arr(v, path)?.iter().enumerate() {
        let tp = format!("{path}[{i}]");
        let o = obj(t, &tp)?;
        let c = rational(field_of(o, "c", &tp)?, &format!("{tp}.c"))?;
        let e = indices(field_of(o, "e", &tp)?, &format!("{tp}.e"))?;
        if e.len() != nvars {
            return Err(perr(
                &format!("{tp}.e"),
                format!("exponent vector has length {}, expected {nvars}", e.len()),
            ));
        }
        let e: Vec<u32> = e
            .into_iter()
            .map(|x| u32::try_from(x).map_err(|_| perr(&format!("{tp}.e"), "exponent too large")))
            .collect::<Result<_>>()?;
        terms.push((c, e));
    }
    Polynomial::from_terms(nvars, terms)
}

fn poly_json(p: &Polynomial<Q>) -> Value {
    Value::Array(
        p.terms()
            .map(|(e, c)| json!({"c": c.to_json(), "e": e}))
            .collect(),
    )
}

/// A vector field on `R^m`: `m` component term lists.
fn parse_field(v: &Value, path: &str) -> Result<TestMap<Q>> {
    let comps = arr(v, path)?;
    let m = comps.len();
    let polys = comps
        .iter()
        .enumerate()
        .map(|(i, c)| parse_poly(c, m, &format!("{path}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    TestMap::new(m, polys.into_iter().map(Component::Poly).collect())
}

fn field_json(f: &TestMap<Q>) -> Value {
    Value::Array(f.components().iter().map(|c| poly_json(c.polynomial())).collect())
}

fn parse_test_map(v: &Value, path: &str) -> Result<TestMap<Q>> {
    let o = obj(v, path)?;
    let k = get_usize(o, "vars", path)?;
    let comps = arr(field_of(o, "components", path)?, &format!("{path}.components"))?;
    let mut out = Vec::with_capacity(comps.len());
    for (i, c) in comps.iter().enumerate() {
        let cp = format!("{path}.components[{i}]");
        out.push(match c {
            Value::Object(co) => {
                let name = get_str(co, "apply", &cp)?;
                let e = Elementary::parse(name)
                    .ok_or_else(|| perr(&format!("{cp}.apply"), format!("unknown function `{name}`")))?;
                Component::Apply(e, parse_poly(field_of(co, "poly", &cp)?, k, &format!("{cp}.poly"))?)
            }
            other => Component::Poly(parse_poly(other, k, &cp)?),
        });
    }
    TestMap::new(k, out)
}

fn test_map_json(f: &TestMap<Q>) -> Value {
    let comps: Vec<Value> = f
        .components()
        .iter()
        .map(|c| match c {
            Component::Poly(p) => poly_json(p),
            Component::Apply(e, p) => json!({"apply": e.name(), "poly": poly_json(p)}),
        })
        .collect();
    json!({"vars": f.nvars(), "components": comps})
}

fn parse_kernel(v: &Value, path: &str) -> Result<Kernel<Q>> {
    let o = obj(v, path)?;
    let p = get_usize(o, "p", path)?;
    let m = get_usize(o, "dim", path)?;
    let mut k = Kernel::zero(p, m);
    for (i, e) in arr(field_of(o, "entries", path)?, &format!("{path}.entries"))?
        .iter()
        .enumerate()
    {
        let ep = format!("{path}.entries[{i}]");
        let eo = obj(e, &ep)?;
        let c = get_usize(eo, "component", &ep)?;
        let slots: Vec<usize> = indices(field_of(eo, "slots", &ep)?, &format!("{ep}.slots"))?
            .into_iter()
            .map(|x| x as usize)
            .collect();
        if c >= m {
            return Err(perr(&format!("{ep}.component"), format!("component {c} out of range 0..{m}")));
        }
        if slots.len() != p || slots.iter().any(|&s| s >= m) {
            return Err(perr(
                &format!("{ep}.slots"),
                format!("expected {p} slot indices in 0..{m}"),
            ));
        }
        let poly = parse_poly(field_of(eo, "poly", &ep)?, m, &format!("{ep}.poly"))?;
        let prev = k.entries().find(|(key, _)| key.0 == c && key.1 == slots).map(|(_, q)| q.clone());
        let poly = match prev {
            Some(q) => q.add(&poly),
            None => poly,
        };
        k.set(c, slots, poly).map_err(|e| perr(&ep, e.to_string()))?;
    }
    Ok(k)
}

fn kernel_json(k: &Kernel<Q>) -> Value {
    let entries: Vec<Value> = k
        .entries()
        .map(|((c, slots), poly)| json!({"component": c, "slots": slots, "poly": poly_json(poly)}))
        .collect();
    json!({"p": k.degree(), "dim": k.dim(), "entries": entries})
}

fn parse_terms(v: &Value, k: usize, path: &str) -> Result<Vec<DerivTerm<Q>>> {
    arr(v, path)?
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let tp = format!("{path}[{i}]");
            let o = obj(t, &tp)?;
            let weight = rational(field_of(o, "w", &tp)?, &format!("{tp}.w"))?;
            let point = rationals(field_of(o, "at", &tp)?, &format!("{tp}.at"))?;
            let orders: Vec<u32> = indices(field_of(o, "orders", &tp)?, &format!("{tp}.orders"))?
                .into_iter()
                .map(|x| x as u32)
                .collect();
            if point.len() != k {
                return Err(perr(&format!("{tp}.at"), format!("expected {k} coordinates")));
            }
            if orders.len() != k {
                return Err(perr(&format!("{tp}.orders"), format!("expected {k} orders")));
            }
            Ok(DerivTerm { weight, point, orders })
        })
        .collect()
}

fn terms_json(terms: &[DerivTerm<Q>]) -> Value {
    Value::Array(
        terms
            .iter()
            .map(|t| json!({"w": t.weight.to_json(), "at": rationals_json(&t.point), "orders": t.orders}))
            .collect(),
    )
}

fn parse_distribution(v: &Value, path: &str) -> Result<CompactDistribution<Q>> {
    let o = obj(v, path)?;
    let domain = match (o.get("base"), o.get("factors")) {
        (Some(b), None) => Domain::euclidean(rationals(b, &format!("{path}.base"))?),
        (None, Some(f)) => {
            let parts = arr(f, &format!("{path}.factors"))?
                .iter()
                .enumerate()
                .map(|(i, b)| Ok(Domain::euclidean(rationals(b, &format!("{path}.factors[{i}]"))?)))
                .collect::<Result<Vec<_>>>()?;
            Domain::product(&parts.iter().collect::<Vec<_>>())
        }
        _ => return Err(perr(path, "expected exactly one of `base` or `factors`")),
    };
    let terms = parse_terms(field_of(o, "terms", path)?, domain.dim(), &format!("{path}.terms"))?;
    CompactDistribution::new(domain, terms).map_err(|e| perr(path, e.to_string()))
}

fn domain_bases(d: &Domain) -> Vec<Vec<Q>> {
    d.factors()
        .iter()
        .filter_map(|f| match f {
            Factor::Euclidean(b) => Some(b.clone()),
            _ => None,
        })
        .collect()
}

fn distribution_json(u: &CompactDistribution<Q>) -> Value {
    let bases = domain_bases(u.domain());
    let mut o = Map::new();
    if bases.len() == 1 {
        o.insert("base".into(), rationals_json(&bases[0]));
    } else {
        o.insert("factors".into(), Value::Array(bases.iter().map(|b| rationals_json(b)).collect()));
    }
    o.insert("terms".into(), terms_json(u.terms()));
    Value::Object(o)
}

fn parse_functional(v: &Value, path: &str) -> Result<FunctionalSpec> {
    let o = obj(v, path)?;
    let at_path = |k: &str| format!("{path}.{k}");
    let base = rationals(field_of(o, "base", path)?, &at_path("base"))?;
    let k = base.len();
    let point = |key: &str| -> Result<Vec<Q>> {
        let x = rationals(field_of(o, key, path)?, &at_path(key))?;
        if x.len() != k {
            return Err(perr(&at_path(key), format!("expected {k} coordinates")));
        }
        Ok(x)
    };
    match get_str(o, "type", path)? {
        "dirac" => Ok(FunctionalSpec::Dirac {
            dim: get_usize(o, "dim", path)?,
            at: point("at")?,
            base,
        }),
        "derivative" => Ok(FunctionalSpec::Derivative {
            dim: get_usize(o, "dim", path)?,
            terms: parse_terms(field_of(o, "terms", path)?, k, &at_path("terms"))?,
            base,
        }),
        "point-polynomial" => {
            let post = parse_test_map(field_of(o, "post", path)?, &at_path("post"))?;
            if post.nvars() != post.target() {
                return Err(perr(&at_path("post"), "post map must be a self-map of R^m"));
            }
            Ok(FunctionalSpec::PointPolynomial {
                at: point("at")?,
                terms: parse_terms(field_of(o, "terms", path)?, k, &at_path("terms"))?,
                post,
                base,
            })
        }
        other => Err(perr(&at_path("type"), format!("unknown functional type `{other}`"))),
    }
}

fn functional_json(f: &FunctionalSpec) -> Value {
    match f {
        FunctionalSpec::Dirac { base, dim, at } => {
            json!({"type": "dirac", "base": rationals_json(base), "dim": dim, "at": rationals_json(at)})
        }
        FunctionalSpec::Derivative { base, dim, terms } => {
            json!({"type": "derivative", "base": rationals_json(base), "dim": dim, "terms": terms_json(terms)})
        }
        FunctionalSpec::PointPolynomial { base, at, post, terms } => json!({
            "type": "point-polynomial",
            "base": rationals_json(base),
            "at": rationals_json(at),
            "post": test_map_json(post),
            "terms": terms_json(terms),
        }),
    }
}

pub fn icon_json(i: &IconSpec) -> Value {
    let mut o = Map::new();
    o.insert("family".into(), json!(i.family()));
    match i {
        IconSpec::VectorField(f) => {
            o.insert("field".into(), field_json(f));
        }
        IconSpec::Kernel(k) => {
            o.insert("kernel".into(), kernel_json(k));
        }
        IconSpec::DiracCurve { base, dim, velocity } => {
            o.insert("base".into(), rationals_json(base));
            o.insert("dim".into(), json!(dim));
            o.insert("velocity".into(), rationals_json(velocity));
        }
        IconSpec::DerivativeFlow { base, dim, terms } => {
            o.insert("base".into(), rationals_json(base));
            o.insert("dim".into(), json!(dim));
            o.insert("terms".into(), terms_json(terms));
        }
        IconSpec::AffineSquare { u1, u2, u12 } => {
            o.insert("u1".into(), functional_json(u1));
            o.insert("u2".into(), functional_json(u2));
            o.insert("u12".into(), functional_json(u12));
        }
        IconSpec::DiracFlow(u) => {
            o.insert("distribution".into(), distribution_json(u));
        }
        IconSpec::PointFlow { base, velocity } => {
            o.insert("base".into(), rationals_json(base));
            o.insert("velocity".into(), rationals_json(velocity));
        }
    }
    Value::Object(o)
}

fn parse_microcube(v: &Value, path: &str) -> Result<Microcube<Q>> {
    let o = obj(v, path)?;
    let n = get_usize(o, "arity", path)?;
    let m = get_usize(o, "dim", path)?;
    if n > 16 {
        return Err(perr(&format!("{path}.arity"), "arity above 16"));
    }
    let mut c = Microcube::zero(n, m);
    for (i, e) in arr(field_of(o, "coeffs", path)?, &format!("{path}.coeffs"))?
        .iter()
        .enumerate()
    {
        let ep = format!("{path}.coeffs[{i}]");
        let eo = obj(e, &ep)?;
        let s: Vec<usize> = indices(field_of(eo, "subset", &ep)?, &format!("{ep}.subset"))?
            .into_iter()
            .map(|x| x as usize)
            .collect();
        if s.iter().any(|&j| j == 0 || j > n) {
            return Err(perr(&format!("{ep}.subset"), format!("indices must lie in 1..={n}")));
        }
        let point = rationals(field_of(eo, "point", &ep)?, &format!("{ep}.point"))?;
        if point.len() != m {
            return Err(perr(&format!("{ep}.point"), format!("expected {m} coordinates")));
        }
        c.set(subset(&s), point.into_iter().map(Weil::constant).collect());
    }
    Ok(c)
}

/// Microcubes with scalar coefficients; generator content is dropped.
pub fn microcube_json(c: &Microcube<Q>) -> Value {
    let coeffs: Vec<Value> = c
        .coeffs()
        .filter(|(_, p)| p.iter().any(|w| !w.is_zero()))
        .map(|(&mask, p)| {
            let pt: Vec<Q> = p.iter().map(|w| w.constant_term()).collect();
            json!({"subset": subset_indices(mask), "point": rationals_json(&pt)})
        })
        .collect();
    json!({"arity": c.arity(), "dim": c.dim(), "coeffs": coeffs})
}

/// Encodes a point of scalars.
pub fn point_json<S: Scalar>(p: &[Weil<S>]) -> Value {
    Value::Array(p.iter().map(weil_json).collect())
}

/// A Weil element: its scalar value when it has no generator content,
/// otherwise its display form.
pub fn weil_json<S: Scalar>(w: &Weil<S>) -> Value {
    match w.as_scalar() {
        Some(s) => s.to_json(),
        None => json!(w.to_string()),
    }
}

pub fn polynomial_json(p: &Polynomial<Q>) -> Value {
    poly_json(p)
}

pub fn vector_field_json(f: &TestMap<Q>) -> Value {
    field_json(f)
}

pub fn kernel_to_json(k: &Kernel<Q>) -> Value {
    kernel_json(k)
}

pub fn distribution_to_json(u: &CompactDistribution<Q>) -> Value {
    distribution_json(u)
}

pub fn test_map_to_json(f: &TestMap<Q>) -> Value {
    test_map_json(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn parses_the_documented_field() {
        let doc = InputDoc::parse(r#"{"fields":{"f":[[{"c":[1,1],"e":[0,1]}],[]]}}"#).unwrap();
        let f = doc.field("f").unwrap();
        assert_eq!(f.nvars(), 2);
        assert_eq!(f.target(), 2);
        let x = [Weil::constant(rat(3, 1)), Weil::constant(rat(5, 1))];
        assert_eq!(f.eval(&x).unwrap(), vec![Weil::constant(rat(5, 1)), Weil::zero()]);
    }

    #[test]
    fn identity_kernel_has_slot_arity_one() {
        let doc = InputDoc::parse(
            r#"{"kernels":{"I":{"p":1,"dim":2,"entries":[
                {"component":0,"slots":[0],"poly":[{"c":[1,1],"e":[0,0]}]},
                {"component":1,"slots":[1],"poly":[{"c":[1,1],"e":[0,0]}]}]}}}"#,
        )
        .unwrap();
        let k = doc.kernel("I").unwrap();
        assert_eq!(k.degree(), 1);
        assert_eq!(*k, Kernel::identity(2));
    }

    #[test]
    fn bad_exponent_length_names_the_component() {
        let err = InputDoc::parse(r#"{"fields":{"f":[[{"c":[1,1],"e":[0]}],[]]}}"#).unwrap_err();
        match err {
            Error::Parse { path, .. } => assert_eq!(path, "fields.f[0][0].e"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = InputDoc::parse("{\n  \"fields\": [").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn references_resolve_and_emit_inline() {
        let text = r#"{"schema":1,
            "fields":{"f":[[{"c":[1,1],"e":[0,1]}],[]]},
            "icons":{"x":{"family":"vector-field","field":"f"},
                     "y":{"family":"point-flow","base":[[1,2]],"velocity":[[-3,1]]}}}"#;
        let doc = InputDoc::parse(text).unwrap();
        assert_eq!(doc.icon("x"), Some(&IconSpec::VectorField(doc.field("f").unwrap().clone())));
        let again = InputDoc::from_value(&doc.to_json()).unwrap();
        assert_eq!(again, doc);
    }

    #[test]
    fn unknown_sections_and_families_are_rejected() {
        assert!(matches!(InputDoc::parse(r#"{"feilds":{}}"#), Err(Error::Parse { .. })));
        let err = InputDoc::parse(r#"{"icons":{"x":{"family":"spiral"}}}"#).unwrap_err();
        assert!(matches!(err, Error::Parse { ref path, .. } if path == "icons.x.family"));
    }
}
