//! Clebsch–Gordan and Wigner 6j symbols via the Racah formulas.
//!
//! Angular momenta are carried as doubled integers so that every factorial
//! argument is an exact integer.

use crate::error::{Error, Result};

/// A half-integer value stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const fn from_doubled(doubled: i32) -> Self {
        Self(doubled)
    }

    pub fn from_f64(value: f64) -> Result<Self> {
        let doubled = 2.0 * value;
        if !doubled.is_finite() || (doubled - doubled.round()).abs() > 1e-9 {
            return Err(Error::Domain(format!("{value} is not a half-integer")));
        }
        Ok(Self(doubled.round() as i32))
    }

    pub const fn doubled(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }
}

fn factorial(n: i32) -> f64 {
    debug_assert!(n >= 0);
    (1..=n).fold(1.0, |acc, k| acc * f64::from(k))
}

/// Factorial of a doubled argument that must be even and non-negative.
fn fact2(doubled: i32) -> f64 {
    debug_assert!(doubled >= 0 && doubled % 2 == 0);
    factorial(doubled / 2)
}

fn check_spin(j: HalfInt) -> Result<()> {
    if j.0 < 0 {
        return Err(Error::Domain(format!("negative spin {}", j.value())));
    }
    Ok(())
}

fn check_projection(j: HalfInt, m: HalfInt) -> Result<()> {
    if m.0.abs() > j.0 || (j.0 - m.0) % 2 != 0 {
        return Err(Error::Domain(format!(
            "projection {} invalid for spin {}",
            m.value(),
            j.value()
        )));
    }
    Ok(())
}

/// True when `c` lies in the triangle of `a` and `b` with integer perimeter.
fn triangle(a: HalfInt, b: HalfInt, c: HalfInt) -> bool {
    let (a, b, c) = (a.0, b.0, c.0);
    c >= (a - b).abs() && c <= a + b && (a + b + c) % 2 == 0
}

fn triangle_coefficient(a: HalfInt, b: HalfInt, c: HalfInt) -> f64 {
    let (a, b, c) = (a.0, b.0, c.0);
    (fact2(a + b - c) * fact2(a - b + c) * fact2(-a + b + c) / fact2(a + b + c + 2)).sqrt()
}

/// `<j1 m1; j2 m2 | j m>` in the Condon–Shortley convention.
pub fn clebsch_gordan(
    j1: HalfInt,
    m1: HalfInt,
    j2: HalfInt,
    m2: HalfInt,
    j: HalfInt,
    m: HalfInt,
) -> Result<f64> {
    for (spin, proj) in [(j1, m1), (j2, m2), (j, m)] {
        check_spin(spin)?;
        check_projection(spin, proj)?;
    }
    if m.0 != m1.0 + m2.0 || !triangle(j1, j2, j) {
        return Ok(0.0);
    }

    let (j1, m1, j2, m2, j, m) = (j1.0, m1.0, j2.0, m2.0, j.0, m.0);
    let prefactor = (f64::from(j + 1)
        * fact2(j + j1 - j2)
        * fact2(j - j1 + j2)
        * fact2(j1 + j2 - j)
        / fact2(j1 + j2 + j + 2))
    .sqrt()
        * (fact2(j + m) * fact2(j - m) * fact2(j1 - m1) * fact2(j1 + m1) * fact2(j2 - m2) * fact2(j2 + m2))
            .sqrt();

    // doubled summation index; every denominator argument must stay >= 0
    let k_min = 0.max(j2 - j - m1).max(j1 + m2 - j);
    let k_max = (j1 + j2 - j).min(j1 - m1).min(j2 + m2);
    let mut sum = 0.0;
    let mut k = k_min;
    while k <= k_max {
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign
            / (fact2(k)
                * fact2(j1 + j2 - j - k)
                * fact2(j1 - m1 - k)
                * fact2(j2 + m2 - k)
                * fact2(j - j2 + m1 + k)
                * fact2(j - j1 - m2 + k));
        k += 2;
    }
    Ok(prefactor * sum)
}

/// Wigner 6j symbol `{j1 j2 j3; j4 j5 j6}`.
pub fn wigner_6j(
    j1: HalfInt,
    j2: HalfInt,
    j3: HalfInt,
    j4: HalfInt,
    j5: HalfInt,
    j6: HalfInt,
) -> Result<f64> {
    for spin in [j1, j2, j3, j4, j5, j6] {
        check_spin(spin)?;
    }
    let triads = [(j1, j2, j3), (j1, j5, j6), (j4, j2, j6), (j4, j5, j3)];
    if triads.iter().any(|&(a, b, c)| !triangle(a, b, c)) {
        return Ok(0.0);
    }
    let delta: f64 = triads
        .iter()
        .map(|&(a, b, c)| triangle_coefficient(a, b, c))
        .product();

    let (a, b, c, d, e, f) = (j1.0, j2.0, j3.0, j4.0, j5.0, j6.0);
    let z_min = (a + b + c).max(a + e + f).max(d + b + f).max(d + e + c);
    let z_max = (a + b + d + e).min(b + c + e + f).min(c + a + f + d);
    let mut sum = 0.0;
    let mut z = z_min;
    while z <= z_max {
        let sign = if (z / 2) % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * fact2(z + 2)
            / (fact2(z - a - b - c)
                * fact2(z - a - e - f)
                * fact2(z - d - b - f)
                * fact2(z - d - e - c)
                * fact2(a + b + d + e - z)
                * fact2(b + c + e + f - z)
                * fact2(c + a + f + d - z));
        z += 2;
    }
    Ok(delta * sum)
}

/// Overlap `<(j1 j2) j12, j3; j | j1, (j2 j3) j23; j>` between the two
/// coupling orders of three angular momenta.
pub fn recoupling_coefficient(
    j1: HalfInt,
    j2: HalfInt,
    j3: HalfInt,
    j12: HalfInt,
    j23: HalfInt,
    j: HalfInt,
) -> Result<f64> {
    let phase_exponent = (j1.0 + j2.0 + j3.0 + j.0) / 2;
    let sign = if phase_exponent % 2 == 0 { 1.0 } else { -1.0 };
    let norm = (f64::from(j12.0 + 1) * f64::from(j23.0 + 1)).sqrt();
    Ok(sign * norm * wigner_6j(j1, j2, j12, j3, j, j23)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(doubled: i32) -> HalfInt {
        HalfInt::from_doubled(doubled)
    }

    #[test]
    fn singlet_and_stretched() {
        let singlet = clebsch_gordan(h(1), h(1), h(1), h(-1), h(0), h(0)).unwrap();
        assert!((singlet - 0.5f64.sqrt()).abs() < 1e-15);
        let other = clebsch_gordan(h(1), h(-1), h(1), h(1), h(0), h(0)).unwrap();
        assert!((other + 0.5f64.sqrt()).abs() < 1e-15);
        let stretched = clebsch_gordan(h(1), h(1), h(1), h(1), h(2), h(2)).unwrap();
        assert!((stretched - 1.0).abs() < 1e-15);
    }

    #[test]
    fn spin_one_plus_half() {
        let c = clebsch_gordan(h(2), h(2), h(1), h(-1), h(1), h(1)).unwrap();
        assert!((c - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        let c = clebsch_gordan(h(2), h(0), h(1), h(1), h(1), h(1)).unwrap();
        assert!((c + (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn selection_rules_give_zero() {
        assert_eq!(clebsch_gordan(h(1), h(1), h(1), h(1), h(0), h(0)).unwrap(), 0.0);
        assert_eq!(clebsch_gordan(h(1), h(1), h(1), h(1), h(4), h(2)).unwrap(), 0.0);
    }

    #[test]
    fn domain_errors() {
        assert!(HalfInt::from_f64(0.3).is_err());
        assert!(HalfInt::from_f64(f64::NAN).is_err());
        assert_eq!(HalfInt::from_f64(1.5).unwrap().doubled(), 3);
        assert!(clebsch_gordan(h(-1), h(1), h(1), h(1), h(0), h(0)).is_err());
        assert!(clebsch_gordan(h(1), h(3), h(1), h(1), h(2), h(2)).is_err());
        assert!(clebsch_gordan(h(2), h(1), h(1), h(1), h(1), h(1)).is_err());
    }

    #[test]
    fn cg_orthonormality_for_small_spins() {
        // sum_{m1,m2} <j1 m1 j2 m2|J M><j1 m1 j2 m2|J' M'> = delta
        for (dj1, dj2) in [(1i32, 1i32), (2, 1), (3, 1), (2, 2), (3, 2)] {
            let js: Vec<i32> = ((dj1 - dj2).abs()..=dj1 + dj2).step_by(2).collect();
            for &dj in &js {
                for &djp in &js {
                    for dm in (-dj..=dj).step_by(2) {
                        if dm.abs() > djp {
                            continue;
                        }
                        let mut sum = 0.0;
                        for dm1 in (-dj1..=dj1).step_by(2) {
                            let dm2 = dm - dm1;
                            if dm2.abs() > dj2 {
                                continue;
                            }
                            let a = clebsch_gordan(h(dj1), h(dm1), h(dj2), h(dm2), h(dj), h(dm)).unwrap();
                            let b = clebsch_gordan(h(dj1), h(dm1), h(dj2), h(dm2), h(djp), h(dm)).unwrap();
                            sum += a * b;
                        }
                        let expected = if dj == djp { 1.0 } else { 0.0 };
                        assert!((sum - expected).abs() < 1e-13, "{dj1} {dj2} {dj} {djp} {dm}: {sum}");
                    }
                }
            }
        }
    }

    #[test]
    fn known_6j_values() {
        // {1/2 1/2 0; 1/2 1/2 1} = 1/2 and {1/2 1/2 1; 1/2 1/2 1} = 1/6
        let a = wigner_6j(h(1), h(1), h(0), h(1), h(1), h(2)).unwrap();
        assert!((a - 0.5).abs() < 1e-15);
        let b = wigner_6j(h(1), h(1), h(2), h(1), h(1), h(2)).unwrap();
        assert!((b - 1.0 / 6.0).abs() < 1e-15);
        // {1 1 1; 1 1 1} = 1/6
        let c = wigner_6j(h(2), h(2), h(2), h(2), h(2), h(2)).unwrap();
        assert!((c - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(wigner_6j(h(1), h(1), h(4), h(1), h(1), h(2)).unwrap(), 0.0);
    }

    #[test]
    fn recoupling_is_orthogonal_for_three_spin_halves() {
        let half = h(1);
        let total = h(1);
        let inter = [h(0), h(2)];
        for &a in &inter {
            for &b in &inter {
                let dot: f64 = inter
                    .iter()
                    .map(|&x| {
                        recoupling_coefficient(half, half, half, x, a, total).unwrap()
                            * recoupling_coefficient(half, half, half, x, b, total).unwrap()
                    })
                    .sum();
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((dot - expected).abs() < 1e-14);
            }
        }
    }
}
