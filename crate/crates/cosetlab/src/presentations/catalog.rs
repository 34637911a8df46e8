//! Built-in catalog of the knot, surgery, and demo groups.

use super::{parse_presentation, Presentation};
use thiserror::Error;

/// A named catalog presentation, with the expected subgroup-class counts
/// per index when those are pinned for validation.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub presentation: Presentation,
    /// Expected number of subgroup conjugacy classes at index 1, 2, ...;
    /// present for the two surgery groups, whose presentations are validated
    /// against these counts.
    pub eta_oracle: Option<Vec<usize>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CatalogError {
    #[error("unknown catalog group `{0}` (available: {})", CATALOG_NAMES.join(", "))]
    UnknownName(String),
}

const CATALOG_NAMES: [&str; 5] = [
    "trefoil",
    "fig8",
    "trefoil-0surgery",
    "fig8-0surgery",
    "a6-demo",
];

/// Names available through [`catalog_lookup`].
pub fn catalog_names() -> &'static [&'static str] {
    &CATALOG_NAMES
}

/// Look up a built-in group by name.
///
/// * `trefoil` — the trefoil knot group, braid form `xyx = yxy`.
/// * `fig8` — the figure-eight knot group in its two-bridge form.
/// * `trefoil-0surgery` — trefoil group with the 0-framed longitude killed:
///   `(xyx)^2 = x^6`.
/// * `fig8-0surgery` — figure-eight group with its 0-framed longitude
///   `a*b^-1*a^-1*b^2*a^-1*b^-1*a` killed.
/// * `a6-demo` — the order-360 group `< a, b | a^2=b^4=(ab)^5=(ab^2)^5=1 >`,
///   whose index-15 coset space carries the generalized quadrangle of
///   order two.
pub fn catalog_lookup(name: &str) -> Result<CatalogEntry, CatalogError> {
    let (text, eta): (&str, Option<Vec<usize>>) = match name {
        "trefoil" => ("< x, y | x*y*x = y*x*y >", None),
        "fig8" => ("< a, b | a*b*a^-1*b^-1*a = b*a^-1*b^-1*a*b >", None),
        "trefoil-0surgery" => (
            "< x, y | x*y*x = y*x*y, (x*y*x)^2 = x^6 >",
            Some(vec![1, 1, 2, 2, 1, 5, 3, 2, 4, 1, 1, 12]),
        ),
        "fig8-0surgery" => (
            "< a, b | a*b*a^-1*b^-1*a = b*a^-1*b^-1*a*b, a*b^-1*a^-1*b^2*a^-1*b^-1*a = 1 >",
            Some(vec![1, 1, 1, 2, 2, 5, 1, 2, 2, 4, 3, 17]),
        ),
        "a6-demo" => ("< a, b | a^2=b^4=(a*b)^5=(a*b^2)^5=1 >", None),
        other => return Err(CatalogError::UnknownName(other.to_string())),
    };
    let presentation = parse_presentation(text).expect("catalog presentations are well formed");
    Ok(CatalogEntry {
        name: CATALOG_NAMES
            .iter()
            .find(|n| **n == name)
            .expect("matched above"),
        presentation,
        eta_oracle: eta,
    })
}
