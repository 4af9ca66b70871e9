//! Run configuration: a key=value file merged under command-line flags.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use bhkernel::kernels::Case;

use crate::failure::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Function {
    Phi,
    Psi,
    Kernel,
    Density,
    Correlation,
}

impl FromStr for Function {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "phi" => Ok(Function::Phi),
            "psi" => Ok(Function::Psi),
            "kernel" => Ok(Function::Kernel),
            "density" => Ok(Function::Density),
            "correlation" => Ok(Function::Correlation),
            _ => Err(format!("unknown function `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exact,
    Quadrature,
    MellinBarnes,
    AsymptoticLarge,
    AsymptoticSmall,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Quadrature => "quadrature",
            Method::MellinBarnes => "mellin-barnes",
            Method::AsymptoticLarge => "asymptotic-large",
            Method::AsymptoticSmall => "asymptotic-small",
        }
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(Method::Exact),
            "quadrature" => Ok(Method::Quadrature),
            "mellin-barnes" => Ok(Method::MellinBarnes),
            "asymptotic-large" => Ok(Method::AsymptoticLarge),
            "asymptotic-small" => Ok(Method::AsymptoticSmall),
            _ => Err(format!("unknown method `{s}`")),
        }
    }
}

/// Column name of a quantity: hatted names for the quartic case.
pub fn quantity(case: Case, f: Function) -> &'static str {
    match (case, f) {
        (Case::Quartic, Function::Phi) => "phihat",
        (Case::Quartic, Function::Psi) => "psihat",
        (Case::Quartic, Function::Kernel) => "khat",
        (Case::Quartic, Function::Density) => "rhohat",
        (Case::Quartic, Function::Correlation) => "rhohat_c",
        (Case::Sextic, Function::Phi) => "phi",
        (Case::Sextic, Function::Psi) => "psi",
        (Case::Sextic, Function::Kernel) => "k",
        (Case::Sextic, Function::Density) => "rho",
        (Case::Sextic, Function::Correlation) => "rho_c",
    }
}

/// Whether `method` can evaluate `f` in `case`.
pub fn supported(case: Case, f: Function, method: Method) -> bool {
    use Function::*;
    match method {
        Method::Exact => true,
        Method::Quadrature => matches!(f, Phi | Psi),
        Method::MellinBarnes => f == Phi,
        Method::AsymptoticLarge => matches!(f, Phi | Psi | Density),
        Method::AsymptoticSmall => case == Case::Sextic && matches!(f, Phi | Psi),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub xmin: f64,
    pub xmax: f64,
    pub step: f64,
}

impl Grid {
    pub fn validate(&self) -> Result<(), Failure> {
        if !(self.xmin.is_finite() && self.xmax.is_finite() && self.step.is_finite()) {
            return Err(Failure::Usage("grid bounds and step must be finite".into()));
        }
        if self.step <= 0.0 {
            return Err(Failure::Usage(format!(
                "step must be positive, got {}",
                self.step
            )));
        }
        if self.xmin > self.xmax {
            return Err(Failure::Usage(format!(
                "xmin {} exceeds xmax {}",
                self.xmin, self.xmax
            )));
        }
        Ok(())
    }

    /// Grid abscissae `xmin + i·step`, endpoints included up to rounding.
    /// Each point is rounded to 12 significant digits so that `0.1·3` is
    /// evaluated and printed as `0.3`.
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.xmax - self.xmin) / self.step + 1e-9).floor() as usize;
        (0..=n)
            .map(|i| {
                let x = self.xmin + self.step * i as f64;
                format!("{x:.11e}").parse().expect("formatted float parses")
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub case: Case,
    pub function: Function,
    pub grid: Grid,
    pub digits: u32,
    pub methods: Vec<Method>,
    /// Second kernel argument; required when `function` is `kernel`.
    pub y: Option<f64>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), Failure> {
        self.grid.validate()?;
        if self.digits == 0 {
            return Err(Failure::Usage("digits must be positive".into()));
        }
        if self.methods.is_empty() {
            return Err(Failure::Usage("at least one method is required".into()));
        }
        if self.function == Function::Kernel && self.y.is_none() {
            return Err(Failure::Usage("the kernel needs a second argument `y`".into()));
        }
        for &m in &self.methods {
            if !supported(self.case, self.function, m) {
                return Err(Failure::Usage(format!(
                    "method {} does not evaluate {} {}",
                    m.name(),
                    self.case.name(),
                    quantity(self.case, self.function)
                )));
            }
        }
        Ok(())
    }
}

/// Parsed `key=value` file. Blank lines and `#` comments are skipped.
#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, Failure> {
        let mut entries = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Failure::Usage(format!("config line {}: expected key=value", n + 1)))?;
            entries.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(Self { entries })
    }

    /// Rejects keys outside `allowed`.
    pub fn check_keys(&self, allowed: &[&str]) -> Result<(), Failure> {
        match self.entries.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(Failure::Usage(format!("unknown config key `{k}`"))),
            None => Ok(()),
        }
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, Failure>
    where
        T::Err: std::fmt::Display,
    {
        self.entries
            .get(key)
            .map(|v| {
                v.parse()
                    .map_err(|e| Failure::Usage(format!("config key `{key}`: {e}")))
            })
            .transpose()
    }

    pub fn get_list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, Failure>
    where
        T::Err: std::fmt::Display,
    {
        self.entries
            .get(key)
            .map(|v| {
                v.split(',')
                    .map(|s| {
                        s.trim()
                            .parse()
                            .map_err(|e| Failure::Usage(format!("config key `{key}`: {e}")))
                    })
                    .collect()
            })
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_lists() {
        let c = ConfigFile::parse("# run\ncase = sextic\nmethods=exact, quadrature\n\nstep=0.5\n").unwrap();
        assert_eq!(c.get::<Case>("case").unwrap(), Some(Case::Sextic));
        assert_eq!(
            c.get_list::<Method>("methods").unwrap(),
            Some(vec![Method::Exact, Method::Quadrature])
        );
        assert_eq!(c.get::<f64>("step").unwrap(), Some(0.5));
        assert_eq!(c.get::<f64>("xmin").unwrap(), None);
        assert!(c.check_keys(&["case", "methods"]).is_err());
    }

    #[test]
    fn malformed_lines_are_usage_errors() {
        assert!(matches!(
            ConfigFile::parse("case quartic"),
            Err(Failure::Usage(_))
        ));
        let c = ConfigFile::parse("digits=ten").unwrap();
        assert!(matches!(c.get::<u32>("digits"), Err(Failure::Usage(_))));
    }

    #[test]
    fn grid_points_include_both_ends() {
        let g = Grid {
            xmin: 0.0,
            xmax: 1.0,
            step: 0.1,
        };
        let p = g.points();
        assert_eq!(p.len(), 11);
        assert_eq!(p[3], 0.3);
        assert_eq!(p[10], 1.0);
        assert_eq!(
            Grid {
                xmin: 2.0,
                xmax: 2.0,
                step: 1.0
            }
            .points(),
            vec![2.0]
        );
    }

    #[test]
    fn validation() {
        let mut c = RunConfig {
            case: Case::Quartic,
            function: Function::Phi,
            grid: Grid {
                xmin: 0.0,
                xmax: 1.0,
                step: 0.0,
            },
            digits: 20,
            methods: vec![Method::Exact],
            y: None,
        };
        assert!(c.validate().is_err());
        c.grid.step = 0.1;
        assert!(c.validate().is_ok());
        c.methods = vec![Method::AsymptoticSmall];
        assert!(c.validate().is_err());
        c.methods.clear();
        assert!(c.validate().is_err());
        c.methods = vec![Method::Exact];
        c.function = Function::Kernel;
        assert!(c.validate().is_err());
        c.y = Some(1.0);
        assert!(c.validate().is_ok());
    }
}
