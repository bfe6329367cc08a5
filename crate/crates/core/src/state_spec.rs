//! JSON state descriptions.
//!
//! One document describes one state:
//!
//! ```json
//! {"constructor": "cat", "cutoff": [16, 16, 16],
//!  "amplitudes": [[0.8, 0], [0.8, 0], [0.8, 0]], "sign": -1}
//! ```
//!
//! Complex numbers are `[re, im]` pairs and the cutoff is always explicit.
//! Constructors and their fields:
//!
//! | constructor      | fields                                               |
//! |------------------|------------------------------------------------------|
//! | `fock`           | `occupations`                                        |
//! | `ghz`            |                                                      |
//! | `paper_psi`      | three modes                                          |
//! | `coherent`       | `amplitudes`                                         |
//! | `cat`            | `amplitudes`, `sign` (`1` or `-1`)                   |
//! | `explicit`       | `amplitudes` over the whole basis, last mode fastest |
//! | `product`        | `factors`: list of specs, modes concatenated         |
//! | `mixture`        | `components`: list of `{"weight", "spec"}`           |
//! | `random_pure`    | `seed`                                               |
//! | `random_product` | `seed`, optional `partition`                         |
//! | `random_mixture` | `seed`, optional `components` (count), `partition`   |
//!
//! `partition` is a list of mode groups; it defaults to one group per mode.

use num_complex::Complex64 as C64;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::fock::{CutoffSpec, PureState, State};
use crate::states::{
    make_cat, make_coherent, make_fock, make_ghz, make_product, make_psi, random_partitioned_product,
    random_pure, random_separable_mixture, CatParams, CoherentParams, Partition,
    DEFAULT_MIXTURE_COMPONENTS,
};

pub const CONSTRUCTORS: [&str; 11] = [
    "fock",
    "ghz",
    "paper_psi",
    "coherent",
    "cat",
    "explicit",
    "product",
    "mixture",
    "random_pure",
    "random_product",
    "random_mixture",
];

#[derive(Clone, Debug, PartialEq)]
pub enum Constructor {
    Fock { occupations: Vec<usize> },
    Ghz,
    Psi,
    Coherent { amplitudes: Vec<C64> },
    Cat { amplitudes: Vec<C64>, sign: i8 },
    Explicit { amplitudes: Vec<C64> },
    Product { factors: Vec<StateSpec> },
    Mixture { components: Vec<(f64, StateSpec)> },
    RandomPure,
    RandomProduct { partition: Option<Vec<Vec<usize>>> },
    RandomMixture { components: usize, partition: Option<Vec<Vec<usize>>> },
}

impl Constructor {
    pub fn is_random(&self) -> bool {
        matches!(
            self,
            Constructor::RandomPure | Constructor::RandomProduct { .. } | Constructor::RandomMixture { .. }
        )
    }
}

/// A validated state description.
#[derive(Clone, Debug, PartialEq)]
pub struct StateSpec {
    pub constructor: Constructor,
    pub cutoff: CutoffSpec,
    pub seed: Option<u64>,
}

/// The constructed state plus what construction had to say about it.
#[derive(Clone, Debug)]
pub struct BuiltState {
    pub state: State,
    /// Largest truncation deficit of any coherent-type factor.
    pub deficit: Option<f64>,
}

/// Parse and validate a state document.
pub fn parse_state_spec(text: &str) -> Result<StateSpec> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    StateSpec::from_value(&value, "")
}

fn field(path: &str, name: &str) -> String {
    if path.is_empty() {
        name.to_string()
    } else {
        format!("{path}.{name}")
    }
}

struct Obj<'a> {
    map: &'a Map<String, Value>,
    path: &'a str,
}

impl<'a> Obj<'a> {
    fn get(&self, name: &str) -> Option<&'a Value> {
        self.map.get(name)
    }

    fn required(&self, name: &str) -> Result<&'a Value> {
        self.get(name)
            .ok_or_else(|| Error::validation(field(self.path, name), "required field is missing"))
    }

    fn only(&self, allowed: &[&str]) -> Result<()> {
        for key in self.map.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(Error::Schema(format!(
                    "unexpected field `{}` (allowed: {})",
                    field(self.path, key),
                    allowed.join(", ")
                )));
            }
        }
        Ok(())
    }
}

fn as_uint(v: &Value, name: &str) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| Error::validation(name, format!("expected a non-negative integer, got {v}")))
}

fn as_uint_list(v: &Value, name: &str) -> Result<Vec<usize>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::validation(name, "expected a list of non-negative integers"))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| Ok(as_uint(x, &format!("{name}[{i}]"))? as usize))
        .collect()
}

fn as_complex(v: &Value, name: &str) -> Result<C64> {
    let bad = || Error::validation(name, format!("expected [re, im], got {v}"));
    let pair = v.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
    let re = pair[0].as_f64().ok_or_else(bad)?;
    let im = pair[1].as_f64().ok_or_else(bad)?;
    if !(re.is_finite() && im.is_finite()) {
        return Err(bad());
    }
    Ok(C64::new(re, im))
}

fn as_complex_list(v: &Value, name: &str) -> Result<Vec<C64>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::validation(name, "expected a list of [re, im] pairs"))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| as_complex(x, &format!("{name}[{i}]")))
        .collect()
}

fn as_partition(v: &Value, name: &str, n_modes: usize) -> Result<Vec<Vec<usize>>> {
    let groups: Vec<Vec<usize>> = v
        .as_array()
        .ok_or_else(|| Error::validation(name, "expected a list of mode groups"))?
        .iter()
        .enumerate()
        .map(|(i, g)| as_uint_list(g, &format!("{name}[{i}]")))
        .collect::<Result<_>>()?;
    Partition::new(n_modes, groups.clone()).map_err(|e| Error::validation(name, e.to_string()))?;
    Ok(groups)
}

fn check_len(name: &str, found: usize, expected: usize, what: &str) -> Result<()> {
    if found == expected {
        Ok(())
    } else {
        Err(Error::validation(name, format!("expected {expected} {what}, got {found}")))
    }
}

impl StateSpec {
    fn from_value(value: &Value, path: &str) -> Result<Self> {
        let map = value.as_object().ok_or_else(|| {
            Error::Schema(format!(
                "{} must be a JSON object",
                if path.is_empty() { "state document" } else { path }
            ))
        })?;
        let obj = Obj { map, path };
        let tag = obj
            .required("constructor")?
            .as_str()
            .ok_or_else(|| Error::Schema(format!("`{}` must be a string", field(path, "constructor"))))?;
        if !CONSTRUCTORS.contains(&tag) {
            return Err(Error::Schema(format!(
                "unknown constructor `{tag}` (known: {})",
                CONSTRUCTORS.join(", ")
            )));
        }

        let f = |name: &str| field(path, name);
        let dims = as_uint_list(obj.required("cutoff")?, &f("cutoff"))?;
        if dims.is_empty() {
            return Err(Error::validation(f("cutoff"), "at least one mode is required"));
        }
        if let Some(i) = dims.iter().position(|&d| d < 1) {
            return Err(Error::validation(format!("{}[{i}]", f("cutoff")), "cutoff must be at least 1"));
        }
        let cutoff = CutoffSpec::new(dims).map_err(|e| Error::validation(f("cutoff"), e.to_string()))?;
        let n = cutoff.n_modes();
        let seed = obj.get("seed").map(|v| as_uint(v, &f("seed"))).transpose()?;

        let common = ["constructor", "cutoff", "seed"];
        let allow = |extra: &[&str]| {
            let mut all = common.to_vec();
            all.extend_from_slice(extra);
            obj.only(&all)
        };

        let constructor = match tag {
            "fock" => {
                allow(&["occupations"])?;
                let name = f("occupations");
                let occ = as_uint_list(obj.required("occupations")?, &name)?;
                check_len(&name, occ.len(), n, "occupations")?;
                for (i, (&k, &d)) in occ.iter().zip(cutoff.dims()).enumerate() {
                    if k >= d {
                        return Err(Error::validation(
                            format!("{name}[{i}]"),
                            format!("occupation {k} must be below the cutoff {d}"),
                        ));
                    }
                }
                Constructor::Fock { occupations: occ }
            }
            "ghz" => {
                allow(&[])?;
                if n < 2 {
                    return Err(Error::validation(f("cutoff"), "GHZ needs at least two modes"));
                }
                if cutoff.dims().iter().any(|&d| d < 2) {
                    return Err(Error::validation(f("cutoff"), "GHZ needs cutoff at least 2 on every mode"));
                }
                Constructor::Ghz
            }
            "paper_psi" => {
                allow(&[])?;
                check_len(&f("cutoff"), n, 3, "modes")?;
                if cutoff.dims().iter().any(|&d| d < 2) {
                    return Err(Error::validation(f("cutoff"), "cutoff must be at least 2 on every mode"));
                }
                Constructor::Psi
            }
            "coherent" | "cat" => {
                let name = f("amplitudes");
                let amplitudes = as_complex_list(obj.required("amplitudes")?, &name)?;
                check_len(&name, amplitudes.len(), n, "amplitudes")?;
                if tag == "coherent" {
                    allow(&["amplitudes"])?;
                    Constructor::Coherent { amplitudes }
                } else {
                    allow(&["amplitudes", "sign"])?;
                    let sv = obj.required("sign")?;
                    let sign = match sv.as_i64() {
                        Some(1) => 1,
                        Some(-1) => -1,
                        _ => return Err(Error::validation(f("sign"), format!("must be 1 or -1, got {sv}"))),
                    };
                    if sign == -1 && amplitudes.iter().all(|a| a.norm_sqr() == 0.0) {
                        return Err(Error::validation(name, "odd cat state needs a nonzero amplitude"));
                    }
                    Constructor::Cat { amplitudes, sign }
                }
            }
            "explicit" => {
                allow(&["amplitudes"])?;
                let name = f("amplitudes");
                let amplitudes = as_complex_list(obj.required("amplitudes")?, &name)?;
                check_len(&name, amplitudes.len(), cutoff.total_dim(), "amplitudes")?;
                if amplitudes.iter().all(|a| a.norm_sqr() == 0.0) {
                    return Err(Error::validation(name, "amplitudes must not all be zero"));
                }
                Constructor::Explicit { amplitudes }
            }
            "product" => {
                allow(&["factors"])?;
                let name = f("factors");
                let arr = obj
                    .required("factors")?
                    .as_array()
                    .ok_or_else(|| Error::validation(&name, "expected a list of state specs"))?;
                if arr.len() < 2 {
                    return Err(Error::validation(name, "a product needs at least two factors"));
                }
                let factors: Vec<StateSpec> = arr
                    .iter()
                    .enumerate()
                    .map(|(i, v)| StateSpec::from_value(v, &format!("{name}[{i}]")))
                    .collect::<Result<_>>()?;
                let joined: Vec<usize> = factors.iter().flat_map(|s| s.cutoff.dims().to_vec()).collect();
                if joined != cutoff.dims() {
                    return Err(Error::validation(
                        f("cutoff"),
                        format!("must equal the concatenated factor cutoffs {joined:?}"),
                    ));
                }
                if let Some(i) = factors.iter().position(|s| matches!(s.constructor, Constructor::Mixture { .. } | Constructor::RandomMixture { .. })) {
                    return Err(Error::validation(format!("{name}[{i}]"), "product factors must be pure"));
                }
                Constructor::Product { factors }
            }
            "mixture" => {
                allow(&["components"])?;
                let name = f("components");
                let arr = obj
                    .required("components")?
                    .as_array()
                    .ok_or_else(|| Error::validation(&name, "expected a list of {weight, spec} objects"))?;
                if arr.is_empty() {
                    return Err(Error::validation(name, "a mixture needs at least one component"));
                }
                let mut components = Vec::with_capacity(arr.len());
                let mut total = 0.0;
                for (i, c) in arr.iter().enumerate() {
                    let cpath = format!("{name}[{i}]");
                    let cmap = c
                        .as_object()
                        .ok_or_else(|| Error::Schema(format!("{cpath} must be a JSON object")))?;
                    let cobj = Obj { map: cmap, path: &cpath };
                    cobj.only(&["weight", "spec"])?;
                    let wname = field(&cpath, "weight");
                    let w = cobj
                        .required("weight")?
                        .as_f64()
                        .ok_or_else(|| Error::validation(&wname, "expected a number"))?;
                    if !(w > 0.0 && w <= 1.0) {
                        return Err(Error::validation(wname, format!("weight {w} is outside (0, 1]")));
                    }
                    let spec = StateSpec::from_value(cobj.required("spec")?, &field(&cpath, "spec"))?;
                    if spec.cutoff != cutoff {
                        return Err(Error::validation(
                            field(&cpath, "spec.cutoff"),
                            format!("must equal the mixture cutoff {:?}", cutoff.dims()),
                        ));
                    }
                    total += w;
                    components.push((w, spec));
                }
                if (total - 1.0).abs() > 1e-12 {
                    return Err(Error::validation(name, format!("weights sum to {total}, expected 1")));
                }
                Constructor::Mixture { components }
            }
            "random_pure" => {
                allow(&[])?;
                Constructor::RandomPure
            }
            "random_product" => {
                allow(&["partition"])?;
                let partition = obj
                    .get("partition")
                    .map(|v| as_partition(v, &f("partition"), n))
                    .transpose()?;
                Constructor::RandomProduct { partition }
            }
            "random_mixture" => {
                allow(&["components", "partition"])?;
                let components = match obj.get("components") {
                    Some(v) => as_uint(v, &f("components"))? as usize,
                    None => DEFAULT_MIXTURE_COMPONENTS,
                };
                if components == 0 {
                    return Err(Error::validation(f("components"), "must be at least 1"));
                }
                let partition = obj
                    .get("partition")
                    .map(|v| as_partition(v, &f("partition"), n))
                    .transpose()?;
                Constructor::RandomMixture { components, partition }
            }
            _ => unreachable!("tag checked against CONSTRUCTORS"),
        };
        Ok(StateSpec {
            constructor,
            cutoff,
            seed,
        })
    }

    /// Construct the state. `seed` is used by random constructors when the
    /// document does not carry its own.
    pub fn build(&self, seed: Option<u64>) -> Result<BuiltState> {
        let seed = self.seed.or(seed);
        let need_seed = || {
            seed.ok_or_else(|| Error::validation("seed", "random constructors need a seed (in the document or on the command line)"))
        };
        let c = &self.cutoff;
        let partition = |groups: &Option<Vec<Vec<usize>>>| match groups {
            Some(g) => Partition::new(c.n_modes(), g.clone()),
            None => Ok(Partition::singletons(c.n_modes())),
        };
        let pure = |p: PureState| BuiltState {
            state: State::Pure(p),
            deficit: None,
        };
        Ok(match &self.constructor {
            Constructor::Fock { occupations } => pure(make_fock(c, occupations)?),
            Constructor::Ghz => pure(make_ghz(c)?),
            Constructor::Psi => pure(make_psi(c)?),
            Constructor::Coherent { amplitudes } => {
                let t = make_coherent(c, &CoherentParams { amplitudes: amplitudes.clone() })?;
                BuiltState {
                    state: State::Pure(t.state),
                    deficit: Some(t.deficit),
                }
            }
            Constructor::Cat { amplitudes, sign } => {
                let t = make_cat(
                    c,
                    &CatParams {
                        amplitudes: amplitudes.clone(),
                        sign: *sign,
                    },
                )?;
                BuiltState {
                    state: State::Pure(t.state),
                    deficit: Some(t.deficit),
                }
            }
            Constructor::Explicit { amplitudes } => pure(PureState::new(c.clone(), amplitudes.clone())?),
            Constructor::Product { factors } => {
                let mut states = Vec::with_capacity(factors.len());
                let mut deficit: Option<f64> = None;
                for (i, f) in factors.iter().enumerate() {
                    // distinct default seeds so random factors are independent
                    let b = f.build(seed.map(|s| s.wrapping_add(i as u64)))?;
                    deficit = match (deficit, b.deficit) {
                        (Some(a), Some(b)) => Some(a.max(b)),
                        (a, b) => a.or(b),
                    };
                    match b.state {
                        State::Pure(p) => states.push(p),
                        State::Mixed(_) => return Err(Error::validation("factors", "product factors must be pure")),
                    }
                }
                BuiltState {
                    state: State::Pure(make_product(&states)?),
                    deficit,
                }
            }
            Constructor::Mixture { components } => {
                let mut rho = nalgebra::DMatrix::<C64>::zeros(c.total_dim(), c.total_dim());
                let mut deficit: Option<f64> = None;
                for (i, (w, spec)) in components.iter().enumerate() {
                    let b = spec.build(seed.map(|s| s.wrapping_add(i as u64)))?;
                    deficit = match (deficit, b.deficit) {
                        (Some(a), Some(b)) => Some(a.max(b)),
                        (a, b) => a.or(b),
                    };
                    rho += b.state.to_density().matrix() * C64::from(*w);
                }
                BuiltState {
                    state: State::Mixed(crate::fock::DensityMatrix::new(c.clone(), rho)?),
                    deficit,
                }
            }
            Constructor::RandomPure => pure(random_pure(c, need_seed()?)),
            Constructor::RandomProduct { partition: g } => {
                pure(random_partitioned_product(c, &partition(g)?, need_seed()?)?)
            }
            Constructor::RandomMixture {
                components,
                partition: g,
            } => BuiltState {
                state: State::Mixed(random_separable_mixture(c, *components, &partition(g)?, need_seed()?)?.flatten()),
                deficit: None,
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::QuantumState;

    #[test]
    fn ghz_document() {
        let s = parse_state_spec(r#"{"constructor":"ghz","cutoff":[2,2,2]}"#).unwrap();
        assert_eq!(s.constructor, Constructor::Ghz);
        assert_eq!(s.cutoff.dims(), &[2, 2, 2]);
        assert!(s.build(None).unwrap().state.is_pure());
    }

    #[test]
    fn cat_document() {
        let s = parse_state_spec(
            r#"{"constructor":"cat","cutoff":[16,16,16],"amplitudes":[[0.8,0],[0.8,0],[0.8,0]],"sign":-1}"#,
        )
        .unwrap();
        let b = s.build(None).unwrap();
        assert!(b.deficit.unwrap() < 1e-8);
    }

    #[test]
    fn occupation_above_cutoff() {
        let e = parse_state_spec(r#"{"constructor":"fock","cutoff":[2,2],"occupations":[0,2]}"#).unwrap_err();
        match e {
            Error::Validation { field, .. } => assert_eq!(field, "occupations[1]"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn error_kinds() {
        assert!(matches!(
            parse_state_spec("{\"constructor\": \"ghz\",\n \"cutoff\": [2,2,}"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_state_spec(r#"{"constructor":"squeezed","cutoff":[2]}"#),
            Err(Error::Schema(_))
        ));
        assert!(matches!(
            parse_state_spec(r#"{"constructor":"ghz","cutoff":[2,2],"extra":1}"#),
            Err(Error::Schema(_))
        ));
        assert!(matches!(
            parse_state_spec(r#"{"constructor":"cat","cutoff":[4,4],"amplitudes":[[1,0],[1,0]],"sign":0}"#),
            Err(Error::Validation { .. })
        ));
        assert!(matches!(
            parse_state_spec(r#"{"constructor":"ghz"}"#),
            Err(Error::Validation { .. })
        ));
    }

    #[test]
    fn nested_documents() {
        let prod = parse_state_spec(
            r#"{"constructor":"product","cutoff":[3,2,2],"factors":[
                {"constructor":"fock","cutoff":[3],"occupations":[1]},
                {"constructor":"ghz","cutoff":[2,2]}]}"#,
        )
        .unwrap();
        let p = prod.build(None).unwrap().state;
        assert_eq!(p.cutoff().dims(), &[3, 2, 2]);

        let mix = parse_state_spec(
            r#"{"constructor":"mixture","cutoff":[2,2],"components":[
                {"weight":0.5,"spec":{"constructor":"fock","cutoff":[2,2],"occupations":[0,0]}},
                {"weight":0.5,"spec":{"constructor":"fock","cutoff":[2,2],"occupations":[1,1]}}]}"#,
        )
        .unwrap();
        let m = mix.build(None).unwrap().state;
        assert!(!m.is_pure());
        let e = parse_state_spec(
            r#"{"constructor":"mixture","cutoff":[2,2],"components":[
                {"weight":0.5,"spec":{"constructor":"fock","cutoff":[2,3],"occupations":[0,0]}}]}"#,
        )
        .unwrap_err();
        assert!(matches!(e, Error::Validation { .. }));
    }

    #[test]
    fn random_needs_seed() {
        let s = parse_state_spec(r#"{"constructor":"random_mixture","cutoff":[3,3,3],"partition":[[0,1],[2]]}"#).unwrap();
        assert!(s.build(None).is_err());
        let a = s.build(Some(7)).unwrap().state.to_density();
        let b = s.build(Some(7)).unwrap().state.to_density();
        assert_eq!(a, b);
        let bad = parse_state_spec(r#"{"constructor":"random_product","cutoff":[3,3],"partition":[[0]]}"#);
        assert!(matches!(bad, Err(Error::Validation { .. })));
    }
}
