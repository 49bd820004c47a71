//! Rounding used when printing `C` and `B`. Both round upward so the printed
//! numbers remain valid bounds.

/// `B` rounded up to three decimals.
pub fn round_b(b: f64) -> f64 {
    ceil_scaled(b, 1e3)
}

/// `C` rounded up: to two decimals below `1e6`, otherwise to three
/// significant digits.
pub fn round_c(c: f64) -> f64 {
    if c < 1e6 {
        ceil_scaled(c, 1e2)
    } else {
        let scale = 10f64.powi(c.log10().floor() as i32 - 2);
        (c / scale - 1e-9).ceil() * scale
    }
}

/// Text form of [`round_c`]: `37341.72` or `1.12e6`.
pub fn format_c(c: f64) -> String {
    let r = round_c(c);
    if r < 1e6 {
        format!("{r:.2}")
    } else {
        let e = r.log10().floor() as i32;
        let m = r / 10f64.powi(e);
        format!("{m:.2}e{e}")
    }
}

pub fn format_b(b: f64) -> String {
    format!("{:.3}", round_b(b))
}

/// `v` rounded up to `decimals` places, for printing upper bounds.
pub fn format_up(v: f64, decimals: u32) -> String {
    format!("{:.*}", decimals as usize, ceil_scaled(v, 10f64.powi(decimals as i32)))
}

/// `v` rounded down to `decimals` places, for printing lower bounds.
pub fn format_down(v: f64, decimals: u32) -> String {
    let scale = 10f64.powi(decimals as i32);
    format!("{:.*}", decimals as usize, (v * scale + 1e-7).floor() / scale)
}

fn ceil_scaled(v: f64, scale: f64) -> f64 {
    // values already on the grid (up to representation error) stay put
    (v * scale - 1e-7).ceil() / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn b_rounds_up() {
        assert_eq!(round_b(14.159674), 14.160);
        assert_eq!(round_b(2.0 * 0.7238738), 1.448);
        assert_eq!(round_b(14.16), 14.16);
        assert_eq!(format_b(2.0 * 0.7238738), "1.448");
    }

    #[test]
    fn c_formats() {
        assert_eq!(format_c(37341.713), "37341.72");
        assert_eq!(format_c(1.112e6), "1.12e6");
        assert_eq!(format_c(1.62e11), "1.62e11");
        assert_eq!(format_c(1.62009e11), "1.63e11");
        assert_eq!(round_c(5.76e8), 5.76e8);
    }

    #[test]
    fn directed_decimals() {
        assert_eq!(format_up(84.79612, 3), "84.797");
        assert_eq!(format_up(0.003, 3), "0.003");
        assert_eq!(format_down(0.98149, 3), "0.981");
        assert_eq!(format_down(0.981, 3), "0.981");
    }
}
