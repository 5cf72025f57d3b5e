//! Named Laplace transforms for `tdme laplace invert`.
//!
//! | expression            | F(s)                         | f(t)                  |
//! |-----------------------|------------------------------|-----------------------|
//! | `one`                 | 1/s                          | 1                     |
//! | `exp:c`               | 1/(s + c)                    | e^{−ct}               |
//! | `te:c`                | 1/(s + c)²                   | t e^{−ct}             |
//! | `eternal:k`           | Pauli eigenvalue k, eternal  | λ_k(t)                |
//! | `dephasing:g`         | dephasing λ₁ with Γ = g      | λ₁(t)                 |
//! | `nalezyty:a,f0[,mu]`  | (1 − f_s/a)/s, f = f₀μe^{−μt} | 1 − a⁻¹∫₀ᵗ f         |

use serde::Serialize;

use tdme_core::kernels::{dephasing_sin_lambda, dephasing_sin_map_laplace, eternal_deformed_lambda, eternal_map_laplace};
use tdme_core::solvers::{laplace_fn, laplace_invert, LaplaceFn};

use crate::error::CliError;

pub struct Builtin {
    pub transform: LaplaceFn,
    /// Closed-form value at `(α, t)`, where one is registered.
    pub exact: Box<dyn Fn(f64, f64) -> Option<f64>>,
}

fn number(expr: &str, text: &str) -> Result<f64, CliError> {
    text.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| CliError::Config(format!("--expr `{expr}`: `{text}` is not a finite number")))
}

pub fn parse_builtin(expr: &str) -> Result<Builtin, CliError> {
    let (name, arg) = match expr.split_once(':') {
        Some((n, a)) => (n.trim(), Some(a)),
        None => (expr.trim(), None),
    };
    let need = || arg.ok_or_else(|| CliError::Config(format!("--expr `{expr}`: `{name}` takes an argument")));
    Ok(match name {
        "one" => Builtin {
            transform: laplace_fn(|s| 1.0 / s),
            exact: Box::new(|_, _| Some(1.0)),
        },
        "exp" => {
            let c = number(expr, need()?)?;
            Builtin {
                transform: laplace_fn(move |s| 1.0 / (s + c)),
                exact: Box::new(move |alpha, t| (alpha == 1.0).then(|| (-c * t).exp())),
            }
        }
        "te" => {
            let c = number(expr, need()?)?;
            Builtin {
                transform: laplace_fn(move |s| 1.0 / ((s + c) * (s + c))),
                exact: Box::new(move |alpha, t| (alpha == 1.0).then(|| t * (-c * t).exp())),
            }
        }
        "eternal" => {
            let k = match need()?.trim() {
                "1" => 0,
                "2" => 1,
                "3" => 2,
                other => return Err(CliError::Config(format!("--expr `{expr}`: component `{other}` is not 1, 2 or 3"))),
            };
            Builtin {
                transform: eternal_map_laplace()[k].clone(),
                exact: Box::new(move |alpha, t| Some(eternal_deformed_lambda(alpha, t)[k])),
            }
        }
        "dephasing" => {
            let gamma = number(expr, need()?)?;
            if gamma <= 0.0 {
                return Err(CliError::Config(format!("--expr `{expr}`: gamma must be positive")));
            }
            Builtin {
                transform: dephasing_sin_map_laplace(gamma)[0].clone(),
                exact: Box::new(move |alpha, t| Some(dephasing_sin_lambda(gamma, alpha, t))),
            }
        }
        "nalezyty" => {
            let values = need()?
                .split(',')
                .map(|v| number(expr, v))
                .collect::<Result<Vec<_>, _>>()?;
            let (a, f0, mu) = match values[..] {
                [a, f0] => (a, f0, 1.0),
                [a, f0, mu] => (a, f0, mu),
                _ => return Err(CliError::Config(format!("--expr `{expr}`: expected a,f0 or a,f0,mu"))),
            };
            if a <= 0.0 || f0 < 0.0 || mu <= 0.0 {
                return Err(CliError::Config(format!("--expr `{expr}`: need a > 0, f0 >= 0, mu > 0")));
            }
            Builtin {
                transform: laplace_fn(move |s| (1.0 - f0 * mu / (s + mu) / a) / s),
                exact: Box::new(move |alpha, t| (alpha == 1.0).then(|| 1.0 + f0 * (-mu * t).exp_m1() / a)),
            }
        }
        _ => {
            return Err(CliError::Config(format!(
                "--expr `{expr}`: unknown builtin (one, exp:c, te:c, eternal:k, dephasing:g, nalezyty:a,f0[,mu])"
            )))
        }
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Inversion {
    pub expr: String,
    pub t: f64,
    pub alpha: f64,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<f64>,
}

/// Inverts the builtin at `t`, after deforming it as a Pauli eigenvalue when `α < 1`.
pub fn invert(expr: &str, t: f64, alpha: f64) -> Result<Inversion, CliError> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(CliError::Config(format!("--t: must be positive, got {t}")));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(CliError::Config(format!("--alpha: must lie in (0, 1], got {alpha}")));
    }
    let builtin = parse_builtin(expr)?;
    let f = builtin.transform.clone();
    let a2 = alpha * alpha;
    let value = if alpha == 1.0 {
        laplace_invert(&*f, t)?
    } else {
        laplace_invert(move |s| 1.0 / (s - a2 * (s - 1.0 / f(s))), t)?
    };
    let closed_form = (builtin.exact)(alpha, t);
    Ok(Inversion {
        expr: expr.to_string(),
        t,
        alpha,
        value,
        closed_form,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverts_simple_transforms() {
        let r = invert("exp:2", 1.0, 1.0).unwrap();
        assert!((r.value - (-2.0f64).exp()).abs() < 1e-10);
        assert!((r.closed_form.unwrap() - r.value).abs() < 1e-10);
        let r = invert("te:1", 2.0, 1.0).unwrap();
        assert!((r.value - 2.0 * (-2.0f64).exp()).abs() < 1e-10);
        assert!((invert("one", 3.0, 1.0).unwrap().value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn deformed_builtins_match_closed_forms() {
        for expr in ["eternal:1", "eternal:3", "dephasing:1"] {
            let r = invert(expr, 2.5, 0.6).unwrap();
            assert!((r.value - r.closed_form.unwrap()).abs() < 1e-8, "{expr}");
        }
    }

    #[test]
    fn rejects_bad_expressions() {
        for expr in ["exp", "eternal:4", "nope", "exp:x", "nalezyty:1"] {
            assert!(matches!(invert(expr, 1.0, 1.0), Err(CliError::Config(_))), "{expr}");
        }
        assert!(matches!(invert("one", 1.0, 1.5), Err(CliError::Config(_))));
    }
}
