/// Unit-peak Lorentzian with half-width at half-maximum `hwhm`.
#[inline]
pub fn lorentzian_peak1(x: f64, hwhm: f64) -> f64 {
    let h2 = hwhm * hwhm;
    h2 / (x * x + h2)
}

/// Area-normalized Lorentzian with full width `fwhm`.
#[inline]
pub fn lorentzian_density(x: f64, fwhm: f64) -> f64 {
    let hw = 0.5 * fwhm;
    hw / (std::f64::consts::PI * (x * x + hw * hw))
}
