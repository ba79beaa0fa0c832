//! Small elementary functions shared across modules.

/// Below this magnitude `x / (1 - e^{-x})` switches to its Taylor series.
pub const SERIES_THRESHOLD: f64 = 1e-4;

/// `x / (1 - e^{-x})`, finite at `x = 0` where it equals 1.
pub fn x_over_one_minus_exp_neg(x: f64) -> f64 {
    if x.abs() < SERIES_THRESHOLD {
        // x/(1-e^{-x}) = 1 + x/2 + x^2/12 - x^4/720 + ...
        let x2 = x * x;
        1.0 + x / 2.0 + x2 / 12.0 - x2 * x2 / 720.0
    } else {
        -x / (-x).exp_m1()
    }
}

/// `n!` as a float. Overflows to infinity past 170.
pub fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Binomial coefficient `C(n, k)` as a float; zero when `k > n`.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// `sin(x)/x - 1`, accurate for small `x`.
pub fn sinc_minus_one(x: f64) -> f64 {
    if x.abs() < 0.5 {
        // alternating series -x^2/3! + x^4/5! - ...; 12 terms reach roundoff at |x| = 0.5
        let x2 = x * x;
        let mut term = 1.0;
        let mut sum = 0.0;
        for k in 1..=12u32 {
            term *= -x2 / ((2 * k) as f64 * (2 * k + 1) as f64);
            sum += term;
        }
        sum
    } else {
        x.sin() / x - 1.0
    }
}

/// Formats with 17 significant digits, fixed notation for moderate exponents.
pub fn format_sig17(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let exp = x.abs().log10().floor() as i32;
    let sci = format!("{:.16e}", x);
    // exponent from the formatted string, which accounts for rounding up
    let exp = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse::<i32>().ok())
        .unwrap_or(exp);
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        let s = format!("{:.*}", decimals, x);
        trim_fraction(&s)
    } else {
        let (mantissa, e) = sci.split_once('e').unwrap_or((&sci, "0"));
        format!("{}e{}", trim_fraction(mantissa), e)
    }
}

fn trim_fraction(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}
