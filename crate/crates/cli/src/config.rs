//! JSON run configuration.
//!
//! ```json
//! {
//!   "n": 2,
//!   "tau": [0, 0, 0],
//!   "volume": 1,
//!   "classes": [{"d": 2, "angles": [{"p": 1, "q": 4}], "weight": {"num": 1, "den": 1}}],
//!   "conventions": {"angle_unit": "two_pi"}
//! }
//! ```
//!
//! Scalars (`volume`, `weight`, plancherel coefficients) are an integer, a
//! `{"num", "den"}` pair, or a JSON float. A float volume is kept as a double
//! and rules out exact mode; float weights and coefficients are read as the
//! exact binary rational they denote.

use std::fmt;
use std::path::Path;

use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};
use torsion_core::algebra::{int, rat, rational_to_f64, Angle, AngleUnit, Rational};
use torsion_core::lie::{EllipticClass, RayConfig};
use torsion_core::torsion::{OrbifoldData, Real};

/// The pinned example: `n = 2`, trivial `τ`, one `d = 2` class at angle
/// `2π/4`, unit volume and weight.
pub const PINNED_CONFIG: &str = r#"{
  "n": 2,
  "tau": [0, 0, 0],
  "volume": 1,
  "classes": [{"d": 2, "angles": [{"p": 1, "q": 4}], "weight": {"num": 1, "den": 1}}],
  "conventions": {"angle_unit": "two_pi"}
}"#;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// `τ` with `m = 0`; commands move along the ray with `with_m`.
    pub ray: RayConfig,
    pub orbifold: OrbifoldData,
    pub angle_unit: AngleUnit,
}

impl RunConfig {
    pub fn pinned() -> Self {
        parse_config_str(PINNED_CONFIG).expect("pinned config is valid")
    }

    /// Residue period: lcm of every class angle denominator in turns.
    pub fn q(&self) -> usize {
        self.orbifold.period()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

fn join(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("invalid JSON: {0}")]
    Parse(String),
    #[error("schema violation: {}", join(.0))]
    Schema(Vec<Violation>),
}

pub fn parse_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_config_str(&text)
}

pub fn parse_config_str(text: &str) -> Result<RunConfig, ConfigError> {
    let root: Value = serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    let mut w = Walker::default();
    match w.run(&root) {
        Some(cfg) if w.violations.is_empty() => Ok(cfg),
        _ => Err(ConfigError::Schema(w.violations)),
    }
}

#[derive(Default)]
struct Walker {
    violations: Vec<Violation>,
}

const TOP_KEYS: [&str; 6] = ["n", "tau", "volume", "classes", "plancherel", "conventions"];

impl Walker {
    fn fail<T>(&mut self, path: &str, message: impl Into<String>) -> Option<T> {
        self.violations.push(Violation {
            path: path.to_string(),
            message: message.into(),
        });
        None
    }

    fn object<'a>(
        &mut self,
        v: &'a Value,
        path: &str,
        keys: &[&str],
    ) -> Option<&'a Map<String, Value>> {
        let Some(obj) = v.as_object() else {
            return self.fail(path, "expected an object");
        };
        for k in obj.keys() {
            if !keys.contains(&k.as_str()) {
                self.fail::<()>(&format!("{path}.{k}"), "unknown field");
            }
        }
        Some(obj)
    }

    fn required<'a>(
        &mut self,
        obj: &'a Map<String, Value>,
        path: &str,
        key: &str,
    ) -> Option<&'a Value> {
        match obj.get(key) {
            Some(v) => Some(v),
            None => self.fail(&format!("{path}.{key}"), "missing field"),
        }
    }

    fn integer(&mut self, v: &Value, path: &str) -> Option<i64> {
        match v.as_i64() {
            Some(i) => Some(i),
            None => self.fail(path, "expected an integer"),
        }
    }

    fn array<'a>(&mut self, v: &'a Value, path: &str) -> Option<&'a Vec<Value>> {
        match v.as_array() {
            Some(a) => Some(a),
            None => self.fail(path, "expected an array"),
        }
    }

    fn fraction(
        &mut self,
        v: &Value,
        path: &str,
        num_key: &str,
        den_key: &str,
    ) -> Option<(i64, i64)> {
        let obj = self.object(v, path, &[num_key, den_key])?;
        let num = self.required(obj, path, num_key);
        let den = self.required(obj, path, den_key);
        let num = self.integer(num?, &format!("{path}.{num_key}"));
        let den = self.integer(den?, &format!("{path}.{den_key}"));
        let (num, den) = (num?, den?);
        if den <= 0 {
            return self.fail(&format!("{path}.{den_key}"), "must be a positive integer");
        }
        Some((num, den))
    }

    fn scalar(&mut self, v: &Value, path: &str) -> Option<Real> {
        if let Some(i) = v.as_i64() {
            return Some(Real::Exact(int(i)));
        }
        if let Some(x) = v.as_f64() {
            if !x.is_finite() {
                return self.fail(path, "must be finite");
            }
            return Some(Real::Approx(x));
        }
        if v.is_object() {
            let (num, den) = self.fraction(v, path, "num", "den")?;
            return Some(Real::Exact(rat(num, den)));
        }
        self.fail(path, "expected a number or {\"num\", \"den\"}")
    }

    fn exact_scalar(&mut self, v: &Value, path: &str) -> Option<Rational> {
        match self.scalar(v, path)? {
            Real::Exact(r) => Some(r),
            Real::Approx(x) => Some(Rational::from_float(x).expect("finite")),
        }
    }

    fn run(&mut self, root: &Value) -> Option<RunConfig> {
        let obj = self.object(root, "$", &TOP_KEYS)?;

        let unit = match obj.get("conventions") {
            None => AngleUnit::TwoPi,
            Some(c) => self.conventions(c).unwrap_or_default(),
        };

        let n = self
            .required(obj, "$", "n")
            .and_then(|v| self.integer(v, "$.n"));
        let n = match n {
            Some(n) if n >= 1 => Some(n as usize),
            Some(_) => self.fail("$.n", "must be at least 1"),
            None => None,
        };

        let tau = self.required(obj, "$", "tau").and_then(|v| self.tau(v, n));

        let volume = self.required(obj, "$", "volume").and_then(|v| {
            let r = self.scalar(v, "$.volume")?;
            if r.to_f64() > 0.0 {
                Some(r)
            } else {
                self.fail("$.volume", "must be positive")
            }
        });

        let classes = match (obj.get("classes"), n) {
            (None, _) => Some(Vec::new()),
            (Some(v), Some(n)) => self.classes(v, n, unit),
            (Some(_), None) => None,
        };

        let plancherel = match (obj.get("plancherel"), n) {
            (None, _) | (Some(Value::Null), _) => Some(None),
            (Some(v), Some(n)) => self.plancherel(v, n).map(Some),
            (Some(_), None) => None,
        };

        let (n, tau, volume, classes, plancherel) = (n?, tau?, volume?, classes?, plancherel?);
        if !self.violations.is_empty() {
            return None;
        }
        let ray = match RayConfig::new(n, tau, 0) {
            Ok(r) => r,
            Err(e) => return self.fail("$.tau", e.to_string()),
        };
        let orbifold = match OrbifoldData::new(n, volume, classes, plancherel) {
            Ok(o) => o,
            Err(e) => return self.fail("$", e.to_string()),
        };
        Some(RunConfig {
            ray,
            orbifold,
            angle_unit: unit,
        })
    }

    fn conventions(&mut self, v: &Value) -> Option<AngleUnit> {
        let obj = self.object(v, "$.conventions", &["angle_unit"])?;
        match obj.get("angle_unit").map(|u| u.as_str()) {
            None => Some(AngleUnit::TwoPi),
            Some(Some("two_pi")) => Some(AngleUnit::TwoPi),
            Some(Some("pi")) => Some(AngleUnit::Pi),
            Some(_) => self.fail("$.conventions.angle_unit", "expected \"two_pi\" or \"pi\""),
        }
    }

    fn tau(&mut self, v: &Value, n: Option<usize>) -> Option<Vec<i64>> {
        let arr = self.array(v, "$.tau")?;
        let mut tau = Vec::with_capacity(arr.len());
        for (i, x) in arr.iter().enumerate() {
            let path = format!("$.tau[{i}]");
            match self.integer(x, &path) {
                Some(t) if t >= 0 => tau.push(t),
                Some(_) => {
                    self.fail::<()>(&path, "must be non-negative");
                }
                None => {}
            }
        }
        if tau.len() != arr.len() {
            return None;
        }
        if let Some(n) = n {
            if tau.len() != n + 1 {
                return self.fail(
                    "$.tau",
                    format!("expected n + 1 = {} entries, got {}", n + 1, tau.len()),
                );
            }
        }
        if tau.windows(2).any(|w| w[0] < w[1]) {
            return self.fail("$.tau", "tau not non-increasing");
        }
        Some(tau)
    }

    fn classes(&mut self, v: &Value, n: usize, unit: AngleUnit) -> Option<Vec<EllipticClass>> {
        let arr = self.array(v, "$.classes")?;
        let mut out = Vec::with_capacity(arr.len());
        let mut ok = true;
        for (i, c) in arr.iter().enumerate() {
            match self.class(c, &format!("$.classes[{i}]"), n, unit) {
                Some(cls) => out.push(cls),
                None => ok = false,
            }
        }
        ok.then_some(out)
    }

    fn class(&mut self, v: &Value, path: &str, n: usize, unit: AngleUnit) -> Option<EllipticClass> {
        let obj = self.object(v, path, &["d", "angles", "weight"])?;
        let d = self
            .required(obj, path, "d")
            .and_then(|x| self.integer(x, &format!("{path}.d")));
        let d = match d {
            Some(d) if d >= 1 && d as usize <= n => Some(d as usize),
            Some(d) => self.fail(
                &format!("{path}.d"),
                format!("d out of range: {d} not in 1..={n}"),
            ),
            None => None,
        };
        let angles = self
            .required(obj, path, "angles")
            .and_then(|a| self.angles(a, &format!("{path}.angles"), unit));
        let weight = self.required(obj, path, "weight").and_then(|x| {
            let wpath = format!("{path}.weight");
            let r = self.exact_scalar(x, &wpath)?;
            if r > Rational::zero() {
                Some(r)
            } else {
                self.fail(&wpath, "must be positive")
            }
        });
        let (d, angles, weight) = (d?, angles?, weight?);
        if angles.len() != n + 1 - d {
            return self.fail(
                &format!("{path}.angles"),
                format!(
                    "expected n + 1 - d = {} angles, got {}",
                    n + 1 - d,
                    angles.len()
                ),
            );
        }
        match EllipticClass::new(n, d, angles, weight) {
            Ok(c) => Some(c),
            Err(e) => self.fail(path, e.to_string()),
        }
    }

    fn angles(&mut self, v: &Value, path: &str, unit: AngleUnit) -> Option<Vec<Angle>> {
        let arr = self.array(v, path)?;
        let mut out: Vec<Angle> = Vec::with_capacity(arr.len());
        let mut ok = true;
        for (j, a) in arr.iter().enumerate() {
            let apath = format!("{path}[{j}]");
            let Some((p, q)) = self.fraction(a, &apath, "p", "q") else {
                ok = false;
                continue;
            };
            let angle = Angle::new(p, q, unit).expect("q > 0");
            if angle.is_zero_mod_two_pi() {
                ok = false;
                self.fail::<()>(&apath, "zero angle");
            } else if out.iter().any(|b| b.congruent(&angle)) {
                ok = false;
                self.fail::<()>(&apath, "angles must be distinct");
            } else {
                out.push(angle);
            }
        }
        ok.then_some(out)
    }

    fn plancherel(&mut self, v: &Value, n: usize) -> Option<Vec<Vec<Rational>>> {
        let arr = self.array(v, "$.plancherel")?;
        if arr.len() != n + 1 {
            return self.fail(
                "$.plancherel",
                format!(
                    "expected n + 1 = {} coefficient lists, got {}",
                    n + 1,
                    arr.len()
                ),
            );
        }
        let mut out = Vec::with_capacity(arr.len());
        for (k, list) in arr.iter().enumerate() {
            let lpath = format!("$.plancherel[{k}]");
            let items = self.array(list, &lpath)?;
            let coeffs: Vec<Option<Rational>> = items
                .iter()
                .enumerate()
                .map(|(i, c)| self.exact_scalar(c, &format!("{lpath}[{i}]")))
                .collect();
            out.push(coeffs.into_iter().collect::<Option<Vec<_>>>()?);
        }
        Some(out)
    }
}

fn rational_json(r: &Rational) -> Value {
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(num), Some(1)) => json!(num),
        (Some(num), Some(den)) => json!({"num": num, "den": den}),
        // only reachable for weights read from binary floats
        _ => json!(rational_to_f64(r)),
    }
}

fn real_json(r: &Real) -> Value {
    match r {
        Real::Exact(x) => rational_json(x),
        Real::Approx(x) => json!(x),
    }
}

/// Canonical JSON for `cfg`; [`parse_config_str`] maps it back to an equal
/// [`RunConfig`].
pub fn to_canonical_json(cfg: &RunConfig) -> String {
    let unit = match cfg.angle_unit {
        AngleUnit::TwoPi => "two_pi",
        AngleUnit::Pi => "pi",
    };
    let classes: Vec<Value> = cfg
        .orbifold
        .classes()
        .iter()
        .map(|c| {
            let angles: Vec<Value> = c
                .angles()
                .iter()
                .map(|a| json!({"p": a.num(), "q": a.den()}))
                .collect();
            let weight = match rational_json(c.weight()) {
                Value::Number(x) if x.is_i64() => json!({"num": x, "den": 1}),
                other => other,
            };
            json!({"d": c.d(), "angles": angles, "weight": weight})
        })
        .collect();
    let mut root = json!({
        "n": cfg.ray.n(),
        "tau": cfg.ray.tau(),
        "volume": real_json(cfg.orbifold.volume()),
        "classes": classes,
        "conventions": {"angle_unit": unit},
    });
    if let Some(p) = cfg.orbifold.plancherel() {
        let lists: Vec<Value> = p
            .iter()
            .map(|poly| Value::Array(poly.even_coeffs().iter().map(rational_json).collect()))
            .collect();
        root["plancherel"] = Value::Array(lists);
    }
    let mut s = serde_json::to_string_pretty(&root).expect("serializable");
    s.push('\n');
    s
}

/// JSON Schema (draft 2020-12) of the config file.
pub fn schema() -> Value {
    let fraction = |a: &str, b: &str| {
        json!({
            "type": "object",
            "required": [a, b],
            "additionalProperties": false,
            "properties": {a: {"type": "integer"}, b: {"type": "integer", "minimum": 1}}
        })
    };
    let scalar = json!({"oneOf": [{"type": "number"}, fraction("num", "den")]});
    json!({
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": "torsion run configuration",
        "type": "object",
        "required": ["n", "tau", "volume"],
        "additionalProperties": false,
        "properties": {
            "n": {"type": "integer", "minimum": 1},
            "tau": {
                "description": "n + 1 non-negative, non-increasing integers",
                "type": "array",
                "items": {"type": "integer", "minimum": 0}
            },
            "volume": scalar,
            "classes": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["d", "angles", "weight"],
                    "additionalProperties": false,
                    "properties": {
                        "d": {"description": "identity block count, 1..=n", "type": "integer", "minimum": 1},
                        "angles": {
                            "description": "n + 1 - d distinct nonzero rotation angles p/q in the angle unit",
                            "type": "array",
                            "items": fraction("p", "q")
                        },
                        "weight": scalar
                    }
                }
            },
            "plancherel": {
                "description": "n + 1 lists of coefficients of nu^0, nu^2, nu^4, ...",
                "type": "array",
                "items": {"type": "array", "items": scalar}
            },
            "conventions": {
                "type": "object",
                "additionalProperties": false,
                "properties": {"angle_unit": {"enum": ["two_pi", "pi"], "default": "two_pi"}}
            }
        }
    })
}
