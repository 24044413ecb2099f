use super::product::{paraproduct, product, resonant};
use crate::error::Result;
use crate::spectral::SpectralField;

/// Trilinear commutator `R(f, g, h) = (f ≺ g) ∘ h - f (g ∘ h)`.
pub fn commutator_r(f: &SpectralField, g: &SpectralField, h: &SpectralField) -> Result<SpectralField> {
    let left = resonant(&paraproduct(f, g)?, h)?;
    let right = product(f, &resonant(g, h)?)?;
    Ok(&left - &right)
}

/// `C(f, g) = sigma(D)(f ≺ g) - f ≺ sigma(D) g` for a real even symbol.
pub fn commutator_ca(
    f: &SpectralField,
    g: &SpectralField,
    symbol: impl Fn(i64) -> f64,
) -> Result<SpectralField> {
    let left = paraproduct(f, g)?.map_real_symbol(&symbol);
    let right = paraproduct(f, &g.map_real_symbol(&symbol))?;
    Ok(&left - &right)
}

/// Paraproduct commutator with the heat operator in its cancelled form,
/// `C(w, Q) = (d_t - nu d_x^2) w ≺ Q - 2 nu (d_x w ≺ d_x Q)`.
///
/// `heat_w` is `(d_t - nu d_x^2) w`, typically the nonlinearity of the
/// equation for `w`.
pub fn commutator_cprec(
    heat_w: &SpectralField,
    w: &SpectralField,
    q: &SpectralField,
    nu: f64,
) -> Result<SpectralField> {
    let first = paraproduct(heat_w, q)?;
    let second = paraproduct(&w.dx(), &q.dx())?;
    let mut out = first;
    out.axpy(-2.0 * nu, &second);
    Ok(out)
}
