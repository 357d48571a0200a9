use super::nucleus::f_sigma_unchecked;
use crate::constants::SQRT_PI;
use crate::error::{Error, Result};
use crate::numeric::composite;
use serde::{Deserialize, Serialize};

/// The four superposition cases: a plate displaced as a whole, and a plate,
/// rod or sphere that expands uniformly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeometryCase {
    DisplacedPlate,
    ExtendedPlate,
    ExtendedRod,
    ExtendedSphere,
}

impl GeometryCase {
    pub const ALL: [GeometryCase; 4] = [
        GeometryCase::DisplacedPlate,
        GeometryCase::ExtendedPlate,
        GeometryCase::ExtendedRod,
        GeometryCase::ExtendedSphere,
    ];

    /// Distribution of nucleus displacements as a fraction u of the surface
    /// displacement.
    pub fn profile(self) -> Profile {
        match self {
            GeometryCase::DisplacedPlate => Profile::Delta,
            GeometryCase::ExtendedPlate => Profile::Uniform,
            GeometryCase::ExtendedRod => Profile::LinearRadial,
            GeometryCase::ExtendedSphere => Profile::QuadraticRadial,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            GeometryCase::DisplacedPlate => "displaced-plate",
            GeometryCase::ExtendedPlate => "extended-plate",
            GeometryCase::ExtendedRod => "extended-rod",
            GeometryCase::ExtendedSphere => "extended-sphere",
        }
    }
}

impl std::str::FromStr for GeometryCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        GeometryCase::ALL
            .into_iter()
            .find(|g| g.label() == s)
            .ok_or_else(|| Error::invalid(format!("unknown geometry '{s}'")))
    }
}

/// Measure over the displacement fraction u ∈ [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Profile {
    /// Every nucleus moves by the full displacement.
    Delta,
    /// du
    Uniform,
    /// 2u du
    LinearRadial,
    /// 3u² du
    QuadraticRadial,
}

impl Profile {
    pub const ALL: [Profile; 4] = [Profile::Delta, Profile::Uniform, Profile::LinearRadial, Profile::QuadraticRadial];

    /// ⟨u^(2n)⟩ under this measure.
    pub fn even_moment(self, n: u32) -> f64 {
        let k = 2.0 * n as f64;
        match self {
            Profile::Delta => 1.0,
            Profile::Uniform => 1.0 / (k + 1.0),
            Profile::LinearRadial => 2.0 / (k + 2.0),
            Profile::QuadraticRadial => 3.0 / (k + 3.0),
        }
    }

    /// Density of the measure at u.
    pub fn weight(self, u: f64) -> f64 {
        match self {
            Profile::Delta => f64::NAN,
            Profile::Uniform => 1.0,
            Profile::LinearRadial => 2.0 * u,
            Profile::QuadraticRadial => 3.0 * u * u,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Profile::Delta => "delta",
            Profile::Uniform => "uniform",
            Profile::LinearRadial => "linear-radial",
            Profile::QuadraticRadial => "quadratic-radial",
        }
    }
}

impl std::str::FromStr for Profile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Profile::ALL
            .into_iter()
            .find(|p| p.label() == s || p.label().replace('-', "_") == s)
            .ok_or_else(|| Error::invalid(format!("unknown profile '{s}'")))
    }
}

/// Geometric factor: the small-displacement prefactor ⟨u²⟩ of each case.
pub fn geometric_factor(g: GeometryCase) -> f64 {
    match g {
        GeometryCase::DisplacedPlate => 1.0,
        GeometryCase::ExtendedPlate => 1.0 / 3.0,
        GeometryCase::ExtendedRod => 0.5,
        GeometryCase::ExtendedSphere => 0.6,
    }
}

const SERIES_UP_TO: f64 = 2.0;
/// Beyond this, erf(t/2) equals 1 to double precision.
const ERF_SATURATED: f64 = 12.0;

fn series_average(p: Profile, x: f64) -> f64 {
    // f(x) = Σ_{n≥1} (−1)^{n+1} (x/2)^{2n} / (n! (2n+1))
    let h2 = 0.25 * x * x;
    let mut pow_fact = 1.0;
    let mut sum = 0.0;
    for n in 1..40u32 {
        pow_fact *= h2 / n as f64;
        let term = pow_fact / (2 * n + 1) as f64 * p.even_moment(n);
        if n % 2 == 1 {
            sum += term;
        } else {
            sum -= term;
        }
        if term < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// ∫₀^x erf(t/2)/t dt.
fn erf_over_t_integral(x: f64) -> f64 {
    let head = x.min(ERF_SATURATED);
    let panels = (head / 2.0).ceil().max(1.0) as usize;
    let base = composite(0.0, head, panels, |t| libm::erf(0.5 * t) / t);
    if x > ERF_SATURATED {
        base + (x / ERF_SATURATED).ln()
    } else {
        base
    }
}

/// Exact average ⟨f_σ(u·x)⟩ over the profile measure.
pub fn profile_average(p: Profile, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::invalid(format!("profile average argument must be >= 0, got {x}")));
    }
    Ok(profile_average_unchecked(p, x))
}

pub(crate) fn profile_average_unchecked(p: Profile, x: f64) -> f64 {
    if p == Profile::Delta {
        return f_sigma_unchecked(x);
    }
    if x <= SERIES_UP_TO {
        return series_average(p, x);
    }
    if x == f64::INFINITY {
        return 1.0;
    }
    let h = 0.5 * x;
    match p {
        Profile::Delta => unreachable!(),
        Profile::Uniform => 1.0 - SQRT_PI / x * erf_over_t_integral(x),
        Profile::LinearRadial => {
            let j = x * libm::erf(h) + 2.0 / SQRT_PI * ((-h * h).exp() - 1.0);
            1.0 - 2.0 * SQRT_PI / (x * x) * j
        }
        Profile::QuadraticRadial => {
            let k = (0.5 * x * x - 1.0) * libm::erf(h) + x / SQRT_PI * (-h * h).exp();
            1.0 - 3.0 * SQRT_PI / (x * x * x) * k
        }
    }
}

/// Large-displacement geometric function, valid for x > 4. The plate cases
/// use the straight-line forms; rod and sphere use the exact profile average.
pub fn geometric_function(g: GeometryCase, x: f64) -> Result<f64> {
    if !(x > 4.0) {
        return Err(Error::Domain(format!(
            "geometric function needs x = ds/sigma > 4, got {x}; use total_energy for smaller displacements"
        )));
    }
    Ok(match g {
        GeometryCase::DisplacedPlate => 1.0 - SQRT_PI / x,
        GeometryCase::ExtendedPlate => {
            let c = 2.0 + SQRT_PI / 2.0 - SQRT_PI * 4f64.ln();
            1.0 - c / x - SQRT_PI * x.ln() / x
        }
        GeometryCase::ExtendedRod | GeometryCase::ExtendedSphere => profile_average_unchecked(g.profile(), x),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn factors_are_second_moments() {
        for g in GeometryCase::ALL {
            assert_relative_eq!(geometric_factor(g), g.profile().even_moment(1), max_relative = 1e-15);
        }
    }

    #[test]
    fn small_x_limit_gives_factor_over_twelve() {
        for g in GeometryCase::ALL {
            let x = 1e-3;
            let r = profile_average(g.profile(), x).unwrap() / (x * x / 12.0);
            assert_relative_eq!(r, geometric_factor(g), max_relative = 1e-6);
        }
    }

    #[test]
    fn series_joins_closed_forms() {
        for p in [Profile::Uniform, Profile::LinearRadial, Profile::QuadraticRadial] {
            let a = series_average(p, SERIES_UP_TO);
            let b = profile_average_unchecked(p, SERIES_UP_TO * (1.0 + 1e-12));
            assert_relative_eq!(a, b, max_relative = 1e-11);
        }
    }

    #[test]
    fn saturated_log_tail_is_continuous() {
        let a = erf_over_t_integral(ERF_SATURATED);
        let b = erf_over_t_integral(ERF_SATURATED * (1.0 + 1e-12));
        assert_relative_eq!(a, b, max_relative = 1e-11);
    }

    #[test]
    fn displaced_plate_function() {
        assert_relative_eq!(geometric_function(GeometryCase::DisplacedPlate, 10.0).unwrap(), 0.8227546, epsilon = 1e-6);
        assert!(geometric_function(GeometryCase::DisplacedPlate, 1e12).unwrap() > 1.0 - 1e-11);
    }

    #[test]
    fn domain_error_at_and_below_four() {
        for g in GeometryCase::ALL {
            assert!(matches!(geometric_function(g, 4.0), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn straight_line_plate_form_tends_to_average() {
        // the printed straight line is the large-x asymptote of the uniform average
        let x = 1e4;
        let exact = profile_average(Profile::Uniform, x).unwrap();
        let line = geometric_function(GeometryCase::ExtendedPlate, x).unwrap();
        assert!((exact - line).abs() < 1e-4);
    }

    #[test]
    fn names_round_trip() {
        for g in GeometryCase::ALL {
            assert_eq!(g.label().parse::<GeometryCase>().unwrap(), g);
        }
        for p in Profile::ALL {
            assert_eq!(p.label().parse::<Profile>().unwrap(), p);
        }
    }

    proptest! {
        #[test]
        fn averages_monotone_bounded(a in 0.0f64..500.0, b in 0.0f64..500.0) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            for p in Profile::ALL {
                let (fl, fh) = (profile_average(p, lo).unwrap(), profile_average(p, hi).unwrap());
                prop_assert!(fl <= fh + 1e-14, "{:?} {} {} {} {}", p, lo, hi, fl, fh);
                prop_assert!(fl >= 0.0 && fh < 1.0);
            }
        }

        #[test]
        fn averages_below_point_value(x in 0.0f64..500.0) {
            // displacements u·x ≤ x and f is nondecreasing
            let f = f_sigma_unchecked(x);
            for p in [Profile::Uniform, Profile::LinearRadial, Profile::QuadraticRadial] {
                prop_assert!(profile_average(p, x).unwrap() <= f + 1e-14);
            }
        }
    }
}
