//! Instance files and the built-in fixtures.
//!
//! An instance names a Hopf algebra (group algebra or function algebra of a
//! finite group), Yetter-Drinfeld data, an optional cocycle and an optional
//! metric. Scalars are written as `"p/q"` strings or as
//! `{"N": 4, "coeffs": ["0", "1"]}` for elements of `Q(z_N)`.

use std::sync::Arc;

use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::hopf::{Element, Functional2, HopfAlgebra};
use crate::bicovariant::YdModule;
use crate::linalg::{Matrix, Tensor};
use crate::scalar::{format_rational, parse_rational, Cyclotomic};

pub const BUILTINS: [&str; 6] = ["FIX-TRIV", "FIX-Z4", "FIX-Z4-1dim", "FIX-Z2xZ2", "FIX-S3", "FIX-FS3"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgebraKind {
    GroupAlgebra,
    FunctionAlgebra,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Named(String),
    Table { labels: Vec<String>, table: Vec<Vec<usize>> },
}

/// A host element: a basis label or an explicit expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElementSpec {
    Label(String),
    Expansion(Vec<Cyclotomic>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ActionSpec {
    Trivial,
    Conjugation,
    /// `action[a][i][j]`
    Explicit(Tensor),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YdSpec {
    pub dim: usize,
    pub degrees: Option<Vec<ElementSpec>>,
    pub action: ActionSpec,
    /// `coaction[i][j][a]`
    pub coaction: Option<Tensor>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CocycleSpec {
    Trivial,
    Bicharacter(Vec<Vec<i64>>),
    Matrix(Matrix),
}

/// A metric entry: a scalar, or an element of the host.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MetricEntry {
    Scalar(Cyclotomic),
    Expansion(Vec<Cyclotomic>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceSpec {
    pub name: String,
    pub order: u32,
    pub kind: AlgebraKind,
    pub group: GroupSpec,
    pub yd: YdSpec,
    pub cocycle: Option<CocycleSpec>,
    pub metric: Option<Vec<Vec<MetricEntry>>>,
    pub tasks: Vec<String>,
}

pub const TASKS: [&str; 4] = ["verify", "braiding", "metrics", "twist"];

/// An instance with its algebraic objects constructed (not yet verified).
#[derive(Clone, Debug)]
pub struct Instance {
    pub spec: InstanceSpec,
    pub group: FiniteGroup,
    pub host: Arc<HopfAlgebra>,
    pub yd: YdModule,
    pub gamma: Functional2,
    pub metric: Option<Vec<Vec<Element>>>,
}

pub fn builtin(name: &str) -> Result<InstanceSpec> {
    let tasks: Vec<String> = TASKS.iter().map(|s| s.to_string()).collect();
    let label = |s: &str| ElementSpec::Label(s.to_string());
    let scalars = |rows: &[&[i64]]| -> Vec<Vec<MetricEntry>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| MetricEntry::Scalar(Cyclotomic::from_int(x))).collect())
            .collect()
    };
    let spec = match name {
        "FIX-TRIV" => InstanceSpec {
            name: name.into(),
            order: 1,
            kind: AlgebraKind::GroupAlgebra,
            group: GroupSpec::Named("Z2".into()),
            yd: YdSpec {
                dim: 1,
                degrees: Some(vec![label("e")]),
                action: ActionSpec::Trivial,
                coaction: None,
            },
            cocycle: Some(CocycleSpec::Trivial),
            metric: Some(scalars(&[&[1]])),
            tasks,
        },
        "FIX-Z4" => InstanceSpec {
            name: name.into(),
            order: 4,
            kind: AlgebraKind::GroupAlgebra,
            group: GroupSpec::Named("Z4".into()),
            yd: YdSpec {
                dim: 2,
                degrees: Some(vec![label("u"), label("u3")]),
                action: ActionSpec::Trivial,
                coaction: None,
            },
            cocycle: Some(CocycleSpec::Bicharacter(vec![vec![1]])),
            metric: Some(scalars(&[&[0, 1], &[1, 0]])),
            tasks,
        },
        "FIX-Z4-1dim" => InstanceSpec {
            name: name.into(),
            order: 4,
            kind: AlgebraKind::GroupAlgebra,
            group: GroupSpec::Named("Z4".into()),
            yd: YdSpec {
                dim: 1,
                degrees: Some(vec![label("u")]),
                action: ActionSpec::Trivial,
                coaction: None,
            },
            cocycle: Some(CocycleSpec::Bicharacter(vec![vec![1]])),
            metric: None,
            tasks,
        },
        "FIX-Z2xZ2" => InstanceSpec {
            name: name.into(),
            order: 2,
            kind: AlgebraKind::GroupAlgebra,
            group: GroupSpec::Named("Z2xZ2".into()),
            yd: YdSpec {
                dim: 2,
                degrees: Some(vec![label("a"), label("b")]),
                action: ActionSpec::Trivial,
                coaction: None,
            },
            cocycle: Some(CocycleSpec::Bicharacter(vec![vec![0, 1], vec![0, 0]])),
            metric: Some(scalars(&[&[1, 0], &[0, 1]])),
            tasks,
        },
        "FIX-S3" => {
            let g = FiniteGroup::symmetric3();
            // coboundary of f with f(e) = 1, f(transposition) = 2, f(3-cycle) = 3
            let f = |x: usize| -> i64 {
                match x {
                    0 => 1,
                    1..=3 => 2,
                    _ => 3,
                }
            };
            let values = Matrix::from_fn(6, 6, |a, b| {
                Cyclotomic::from_ratio(f(a) * f(b), f(g.mul(a, b))).expect("nonzero")
            });
            InstanceSpec {
                name: name.into(),
                order: 1,
                kind: AlgebraKind::GroupAlgebra,
                group: GroupSpec::Named("S3".into()),
                yd: YdSpec {
                    dim: 3,
                    degrees: Some(vec![label("(01)"), label("(12)"), label("(02)")]),
                    action: ActionSpec::Conjugation,
                    coaction: None,
                },
                cocycle: Some(CocycleSpec::Matrix(values)),
                metric: Some(scalars(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])),
                tasks,
            }
        }
        "FIX-FS3" => {
            let g = FiniteGroup::symmetric3();
            let c = g.index_of("(012)").expect("S3 label");
            let power = |x: usize| (0..3).find(|&k| g.pow(c, k) == x);
            let third = Cyclotomic::from_ratio(1, 3).expect("nonzero");
            let values = Matrix::from_fn(6, 6, |x, y| match (power(x), power(y)) {
                (Some(a), Some(b)) => &third * &Cyclotomic::root_of_unity(3, (a * b) as i64).expect("order 3"),
                _ => Cyclotomic::zero(),
            });
            let sign: Vec<Cyclotomic> = [1, -1, -1, -1, 1, 1].iter().map(|&s| Cyclotomic::from_int(s)).collect();
            InstanceSpec {
                name: name.into(),
                order: 3,
                kind: AlgebraKind::FunctionAlgebra,
                group: GroupSpec::Named("S3".into()),
                yd: YdSpec {
                    dim: 1,
                    degrees: Some(vec![ElementSpec::Expansion(sign)]),
                    action: ActionSpec::Trivial,
                    coaction: None,
                },
                cocycle: Some(CocycleSpec::Matrix(values)),
                metric: Some(scalars(&[&[1]])),
                tasks,
            }
        }
        _ => return Err(Error::UnknownInstance(name.to_string())),
    };
    Ok(spec)
}

impl InstanceSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        Self::from_json(&v)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::validation("instance", "expected an object"))?;
        let name = get_str(obj, "name", "name")?.to_string();
        let order = obj
            .get("N")
            .ok_or_else(|| Error::validation("N", "missing"))?
            .as_u64()
            .filter(|&n| n >= 1 && n <= u32::MAX as u64)
            .ok_or_else(|| Error::validation("N", "expected a positive integer"))? as u32;

        let alg = obj
            .get("algebra")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::validation("algebra", "expected an object"))?;
        let kind = match get_str(alg, "kind", "algebra.kind")? {
            "group_algebra" => AlgebraKind::GroupAlgebra,
            "function_algebra" => AlgebraKind::FunctionAlgebra,
            other => return Err(Error::validation("algebra.kind", format!("unknown kind {other:?}"))),
        };
        let group = match alg.get("group") {
            Some(Value::String(s)) => GroupSpec::Named(s.clone()),
            Some(_) => return Err(Error::validation("algebra.group", "expected a group name")),
            None => {
                let table = alg
                    .get("table")
                    .ok_or_else(|| Error::validation("algebra", "needs \"group\" or \"table\""))?;
                let table: Vec<Vec<usize>> = serde_json::from_value(table.clone())
                    .map_err(|e| Error::validation("algebra.table", e.to_string()))?;
                let labels = match alg.get("labels") {
                    Some(l) => serde_json::from_value(l.clone())
                        .map_err(|e| Error::validation("algebra.labels", e.to_string()))?,
                    None => (0..table.len()).map(|i| format!("g{i}")).collect(),
                };
                GroupSpec::Table { labels, table }
            }
        };

        let ydv = obj
            .get("yd_module")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::validation("yd_module", "expected an object"))?;
        let dim = ydv
            .get("dim")
            .and_then(Value::as_u64)
            .filter(|&d| d >= 1)
            .ok_or_else(|| Error::validation("yd.dim", "expected a positive integer"))? as usize;
        let degrees = match ydv.get("degrees") {
            None => None,
            Some(Value::Array(items)) => Some(
                items
                    .iter()
                    .enumerate()
                    .map(|(i, x)| element_spec(x, &format!("yd.degrees[{i}]")))
                    .collect::<Result<Vec<_>>>()?,
            ),
            Some(_) => return Err(Error::validation("yd.degrees", "expected an array")),
        };
        let action = match ydv.get("action") {
            None => ActionSpec::Trivial,
            Some(Value::String(s)) if s == "trivial" => ActionSpec::Trivial,
            Some(Value::String(s)) if s == "conjugation" => ActionSpec::Conjugation,
            Some(Value::String(s)) => return Err(Error::validation("yd.action", format!("unknown action {s:?}"))),
            Some(t) => ActionSpec::Explicit(tensor3(t, "yd.action")?),
        };
        let coaction = match ydv.get("coaction") {
            None => None,
            Some(t) => Some(tensor3(t, "yd.coaction")?),
        };

        let cocycle = match obj.get("cocycle") {
            None | Some(Value::Null) => None,
            Some(c) => {
                let c = c.as_object().ok_or_else(|| Error::validation("cocycle", "expected an object"))?;
                Some(match get_str(c, "type", "cocycle.type")? {
                    "trivial" => CocycleSpec::Trivial,
                    "bicharacter" => {
                        let e = c.get("exponents").ok_or_else(|| Error::validation("cocycle.exponents", "missing"))?;
                        CocycleSpec::Bicharacter(
                            serde_json::from_value(e.clone())
                                .map_err(|e| Error::validation("cocycle.exponents", e.to_string()))?,
                        )
                    }
                    "matrix" => {
                        let m = c.get("values").ok_or_else(|| Error::validation("cocycle.values", "missing"))?;
                        CocycleSpec::Matrix(scalar_matrix(m, "cocycle.values")?)
                    }
                    other => return Err(Error::validation("cocycle.type", format!("unknown type {other:?}"))),
                })
            }
        };

        let metric = match obj.get("metric") {
            None | Some(Value::Null) => None,
            Some(Value::Array(rows)) => Some(
                rows.iter()
                    .enumerate()
                    .map(|(i, row)| {
                        row.as_array()
                            .ok_or_else(|| Error::validation(format!("metric[{i}]"), "expected an array"))?
                            .iter()
                            .enumerate()
                            .map(|(j, x)| {
                                let field = format!("metric[{i}][{j}]");
                                match x {
                                    Value::Array(items) => Ok(MetricEntry::Expansion(
                                        items.iter().map(|s| scalar_from_json(s, &field)).collect::<Result<_>>()?,
                                    )),
                                    _ => Ok(MetricEntry::Scalar(scalar_from_json(x, &field)?)),
                                }
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
            Some(_) => return Err(Error::validation("metric", "expected a matrix")),
        };

        let tasks = match obj.get("tasks") {
            None => TASKS.iter().map(|s| s.to_string()).collect(),
            Some(t) => {
                let t: Vec<String> =
                    serde_json::from_value(t.clone()).map_err(|e| Error::validation("tasks", e.to_string()))?;
                if let Some(bad) = t.iter().find(|x| !TASKS.contains(&x.as_str())) {
                    return Err(Error::validation("tasks", format!("unknown task {bad:?}")));
                }
                t
            }
        };

        Ok(InstanceSpec {
            name,
            order,
            kind,
            group,
            yd: YdSpec {
                dim,
                degrees,
                action,
                coaction,
            },
            cocycle,
            metric,
            tasks,
        })
    }

    pub fn to_json(&self) -> Value {
        let mut alg = Map::new();
        alg.insert(
            "kind".into(),
            json!(match self.kind {
                AlgebraKind::GroupAlgebra => "group_algebra",
                AlgebraKind::FunctionAlgebra => "function_algebra",
            }),
        );
        match &self.group {
            GroupSpec::Named(s) => {
                alg.insert("group".into(), json!(s));
            }
            GroupSpec::Table { labels, table } => {
                alg.insert("labels".into(), json!(labels));
                alg.insert("table".into(), json!(table));
            }
        }
        let mut yd = Map::new();
        yd.insert("dim".into(), json!(self.yd.dim));
        if let Some(ds) = &self.yd.degrees {
            let items: Vec<Value> = ds
                .iter()
                .map(|d| match d {
                    ElementSpec::Label(s) => json!(s),
                    ElementSpec::Expansion(v) => Value::Array(v.iter().map(scalar_to_json).collect()),
                })
                .collect();
            yd.insert("degrees".into(), Value::Array(items));
        }
        yd.insert(
            "action".into(),
            match &self.yd.action {
                ActionSpec::Trivial => json!("trivial"),
                ActionSpec::Conjugation => json!("conjugation"),
                ActionSpec::Explicit(t) => tensor3_to_json(t),
            },
        );
        if let Some(t) = &self.yd.coaction {
            yd.insert("coaction".into(), tensor3_to_json(t));
        }
        let mut obj = Map::new();
        obj.insert("name".into(), json!(self.name));
        obj.insert("N".into(), json!(self.order));
        obj.insert("algebra".into(), Value::Object(alg));
        obj.insert("yd_module".into(), Value::Object(yd));
        if let Some(c) = &self.cocycle {
            obj.insert(
                "cocycle".into(),
                match c {
                    CocycleSpec::Trivial => json!({"type": "trivial"}),
                    CocycleSpec::Bicharacter(e) => json!({"type": "bicharacter", "exponents": e}),
                    CocycleSpec::Matrix(m) => json!({"type": "matrix", "values": matrix_to_json(m)}),
                },
            );
        }
        if let Some(g) = &self.metric {
            let rows: Vec<Value> = g
                .iter()
                .map(|row| {
                    Value::Array(
                        row.iter()
                            .map(|x| match x {
                                MetricEntry::Scalar(s) => scalar_to_json(s),
                                MetricEntry::Expansion(v) => Value::Array(v.iter().map(scalar_to_json).collect()),
                            })
                            .collect(),
                    )
                })
                .collect();
            obj.insert("metric".into(), Value::Array(rows));
        }
        obj.insert("tasks".into(), json!(self.tasks));
        Value::Object(obj)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serializes") + "\n"
    }

    pub fn has_task(&self, task: &str) -> bool {
        self.tasks.iter().any(|t| t == task)
    }

    /// Constructs the algebraic objects, checking shapes and the group
    /// axioms. The Hopf, Yetter-Drinfeld and cocycle axioms are left to the
    /// verification suites.
    pub fn build(&self) -> Result<Instance> {
        let group = match &self.group {
            GroupSpec::Named(s) => FiniteGroup::named(s).map_err(|e| Error::validation("algebra.group", inner(e)))?,
            GroupSpec::Table { labels, table } => FiniteGroup::from_table("G", labels.clone(), table.clone())
                .map_err(|e| Error::validation("algebra", inner(e)))?,
        };
        let host = match self.kind {
            AlgebraKind::GroupAlgebra => HopfAlgebra::group_algebra(&group, self.order)?,
            AlgebraKind::FunctionAlgebra => HopfAlgebra::function_algebra(&group, self.order)?,
        };
        let host = Arc::new(host);
        let n = host.dim();
        let d = self.yd.dim;

        let resolve = |e: &ElementSpec, field: &str| -> Result<Element> {
            match e {
                ElementSpec::Label(s) => host
                    .labels()
                    .iter()
                    .position(|l| l == s)
                    .map(|i| host.basis(i))
                    .ok_or_else(|| Error::validation(field, format!("unknown basis label {s:?}"))),
                ElementSpec::Expansion(v) if v.len() == n => Ok(v.clone()),
                ElementSpec::Expansion(v) => Err(Error::validation(
                    field,
                    format!("expansion has {} entries, algebra has dimension {n}", v.len()),
                )),
            }
        };

        let coaction = match (&self.yd.coaction, &self.yd.degrees) {
            (Some(t), _) => {
                if t.shape() != [d, d, n] {
                    return Err(Error::validation("yd.coaction", format!("shape {:?}, expected [{d}, {d}, {n}]", t.shape())));
                }
                t.clone()
            }
            (None, Some(ds)) => {
                if ds.len() != d {
                    return Err(Error::validation(
                        "yd.degrees length",
                        format!("{} degrees for dimension {d}", ds.len()),
                    ));
                }
                let mut t = Tensor::zeros(&[d, d, n]);
                for (i, deg) in ds.iter().enumerate() {
                    let x = resolve(deg, &format!("yd.degrees[{i}]"))?;
                    for (a, c) in x.into_iter().enumerate() {
                        t.set(&[i, i, a], c);
                    }
                }
                t
            }
            (None, None) => return Err(Error::validation("yd_module", "needs \"degrees\" or \"coaction\"")),
        };

        let action = match &self.yd.action {
            ActionSpec::Trivial => {
                let mut t = Tensor::zeros(&[n, d, d]);
                for a in 0..n {
                    for i in 0..d {
                        t.set(&[a, i, i], host.counit()[a].clone());
                    }
                }
                t
            }
            ActionSpec::Conjugation => {
                if self.kind != AlgebraKind::GroupAlgebra {
                    return Err(Error::validation("yd.action", "conjugation needs a group algebra"));
                }
                let ds = match &self.yd.degrees {
                    Some(ds) if ds.len() == d => ds,
                    _ => return Err(Error::validation("yd.action", "conjugation needs one degree label per basis vector")),
                };
                let idx: Vec<usize> = ds
                    .iter()
                    .enumerate()
                    .map(|(i, e)| match e {
                        ElementSpec::Label(s) => group
                            .index_of(s)
                            .ok_or_else(|| Error::validation(format!("yd.degrees[{i}]"), format!("unknown label {s:?}"))),
                        _ => Err(Error::validation("yd.action", "conjugation needs degree labels")),
                    })
                    .collect::<Result<_>>()?;
                let mut t = Tensor::zeros(&[n, d, d]);
                for g in 0..n {
                    for (i, &ti) in idx.iter().enumerate() {
                        let target = group.conj(ti, g);
                        let j = idx.iter().position(|&x| x == target).ok_or_else(|| {
                            Error::validation("yd.action", "the degrees are not closed under conjugation")
                        })?;
                        t.set(&[g, i, j], Cyclotomic::one());
                    }
                }
                t
            }
            ActionSpec::Explicit(t) => {
                if t.shape() != [n, d, d] {
                    return Err(Error::validation("yd.action", format!("shape {:?}, expected [{n}, {d}, {d}]", t.shape())));
                }
                t.clone()
            }
        };
        let yd = YdModule::from_tensors(host.clone(), &action, &coaction)?;

        let gamma = match &self.cocycle {
            None | Some(CocycleSpec::Trivial) => Functional2::counit(&host),
            Some(CocycleSpec::Matrix(m)) => {
                if m.rows() != n || m.cols() != n {
                    return Err(Error::validation("cocycle.values", format!("expected a {n}x{n} matrix")));
                }
                Functional2::new(&host, m.clone())?
            }
            Some(CocycleSpec::Bicharacter(e)) => {
                Functional2::new(&host, bicharacter_values(&self.group, self.kind, e, self.order)?)?
            }
        };

        let metric = match &self.metric {
            None => None,
            Some(rows) => {
                if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                    return Err(Error::validation("metric", format!("expected a {d}x{d} matrix")));
                }
                Some(
                    rows.iter()
                        .enumerate()
                        .map(|(i, r)| {
                            r.iter()
                                .enumerate()
                                .map(|(j, x)| match x {
                                    MetricEntry::Scalar(s) => Ok(host.scalar(s)),
                                    MetricEntry::Expansion(v) if v.len() == n => Ok(v.clone()),
                                    MetricEntry::Expansion(_) => Err(Error::validation(
                                        format!("metric[{i}][{j}]"),
                                        format!("expansion needs {n} entries"),
                                    )),
                                })
                                .collect::<Result<Vec<_>>>()
                        })
                        .collect::<Result<Vec<_>>>()?,
                )
            }
        };

        Ok(Instance {
            spec: self.clone(),
            group,
            host,
            yd,
            gamma,
            metric,
        })
    }
}

fn inner(e: Error) -> String {
    match e {
        Error::NotAGroup(m) => m,
        other => other.to_string(),
    }
}

/// `gamma(g (x) h) = z_N^(sum x_i E_ij y_j)` on exponent vectors of a named
/// abelian group.
fn bicharacter_values(group: &GroupSpec, kind: AlgebraKind, e: &[Vec<i64>], order: u32) -> Result<Matrix> {
    let name = match (group, kind) {
        (GroupSpec::Named(s), AlgebraKind::GroupAlgebra) if s != "S3" => s,
        _ => {
            return Err(Error::validation(
                "cocycle.type",
                "bicharacters need a named abelian group algebra",
            ))
        }
    };
    let orders: Vec<usize> = name
        .split('x')
        .map(|f| f.trim_start_matches('Z').parse().unwrap_or(0))
        .collect();
    let k = orders.len();
    if e.len() != k || e.iter().any(|r| r.len() != k) {
        return Err(Error::validation("cocycle.exponents", format!("expected a {k}x{k} matrix")));
    }
    let n: usize = orders.iter().product();
    let digits = |mut x: usize| -> Vec<i64> {
        orders
            .iter()
            .map(|&m| {
                let dgt = (x % m) as i64;
                x /= m;
                dgt
            })
            .collect()
    };
    let mut out = Matrix::zeros(n, n);
    for a in 0..n {
        let x = digits(a);
        for b in 0..n {
            let y = digits(b);
            let mut s = 0i64;
            for i in 0..k {
                for j in 0..k {
                    s += x[i] * e[i][j] * y[j];
                }
            }
            out.set(a, b, Cyclotomic::root_of_unity(order, s)?);
        }
    }
    Ok(out)
}

fn get_str<'a>(obj: &'a Map<String, Value>, key: &str, field: &str) -> Result<&'a str> {
    obj.get(key)
        .ok_or_else(|| Error::validation(field, "missing"))?
        .as_str()
        .ok_or_else(|| Error::validation(field, "expected a string"))
}

fn element_spec(v: &Value, field: &str) -> Result<ElementSpec> {
    match v {
        Value::String(s) => Ok(ElementSpec::Label(s.clone())),
        Value::Array(items) => Ok(ElementSpec::Expansion(
            items.iter().map(|x| scalar_from_json(x, field)).collect::<Result<_>>()?,
        )),
        _ => Err(Error::validation(field, "expected a basis label or an expansion")),
    }
}

pub fn scalar_from_json(v: &Value, field: &str) -> Result<Cyclotomic> {
    match v {
        Value::String(s) => parse_rational(s)
            .map(Cyclotomic::rational)
            .map_err(|e| Error::validation(field, inner_parse(e))),
        Value::Number(x) if x.is_i64() => Ok(Cyclotomic::from_int(x.as_i64().expect("checked"))),
        Value::Object(o) => {
            let order = o
                .get("N")
                .and_then(Value::as_u64)
                .filter(|&n| n >= 1 && n <= u32::MAX as u64)
                .ok_or_else(|| Error::validation(field, "scalar needs a positive \"N\""))? as u32;
            let coeffs = o
                .get("coeffs")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::validation(field, "scalar needs \"coeffs\""))?;
            let coeffs = coeffs
                .iter()
                .map(|c| match c {
                    Value::String(s) => parse_rational(s).map_err(|e| Error::validation(field, inner_parse(e))),
                    _ => Err(Error::validation(field, "coefficients are p/q strings")),
                })
                .collect::<Result<Vec<_>>>()?;
            Cyclotomic::from_coeffs(order, coeffs).map_err(|e| Error::validation(field, e.to_string()))
        }
        _ => Err(Error::validation(field, "expected a scalar")),
    }
}

fn inner_parse(e: Error) -> String {
    match e {
        Error::Parse(m) => m,
        other => other.to_string(),
    }
}

pub fn scalar_to_json(c: &Cyclotomic) -> Value {
    match c.to_rational() {
        Some(q) => json!(format_rational(&q)),
        None => json!({
            "N": c.order(),
            "coeffs": c.coeffs().iter().map(format_rational).collect::<Vec<_>>(),
        }),
    }
}

fn scalar_matrix(v: &Value, field: &str) -> Result<Matrix> {
    let rows = v.as_array().ok_or_else(|| Error::validation(field, "expected a matrix"))?;
    let rows = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.as_array()
                .ok_or_else(|| Error::validation(format!("{field}[{i}]"), "expected an array"))?
                .iter()
                .enumerate()
                .map(|(j, x)| scalar_from_json(x, &format!("{field}[{i}][{j}]")))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows).map_err(|e| Error::validation(field, e.to_string()))
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(scalar_to_json).collect()))
            .collect(),
    )
}

fn tensor3(v: &Value, field: &str) -> Result<Tensor> {
    let outer = v.as_array().ok_or_else(|| Error::validation(field, "expected a nested array"))?;
    let mut data = Vec::new();
    let mut shape: Option<[usize; 3]> = None;
    for (a, m) in outer.iter().enumerate() {
        let m = scalar_matrix(m, &format!("{field}[{a}]"))?;
        let s = [outer.len(), m.rows(), m.cols()];
        if shape.is_some_and(|x| x != s) {
            return Err(Error::validation(field, "ragged tensor"));
        }
        shape = Some(s);
        data.extend(m.entries().iter().cloned());
    }
    let shape = shape.ok_or_else(|| Error::validation(field, "empty tensor"))?;
    Tensor::from_vec(&shape, data).map_err(|e| Error::validation(field, e.to_string()))
}

fn tensor3_to_json(t: &Tensor) -> Value {
    let s = t.shape();
    Value::Array(
        (0..s[0])
            .map(|a| {
                Value::Array(
                    (0..s[1])
                        .map(|i| Value::Array((0..s[2]).map(|j| scalar_to_json(t.get(&[a, i, j]))).collect()))
                        .collect(),
                )
            })
            .collect(),
    )
}

/// Loads a built-in by name or an instance file by path.
pub fn load(source: &str) -> Result<InstanceSpec> {
    if BUILTINS.contains(&source) {
        return builtin(source);
    }
    let text = std::fs::read_to_string(source).map_err(|e| Error::Parse(format!("{source}: {e}")))?;
    InstanceSpec::parse(&text)
}
