//! Human-readable forms and parameter ranges, one entry per constructor arm.

/// One printable catalog line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ListingEntry {
    pub id: &'static str,
    /// `G(r1, .., r6)` for implicit members, `lhs <= rhs` for explicit ones.
    pub form: &'static str,
    /// Real parameters in the order the constructor reads them.
    pub params: &'static [&'static str],
    pub needs_phi: bool,
    pub range: &'static str,
}

const fn entry(
    id: &'static str,
    form: &'static str,
    params: &'static [&'static str],
    range: &'static str,
) -> ListingEntry {
    ListingEntry {
        id,
        form,
        params,
        needs_phi: false,
        range,
    }
}

const fn with_phi(id: &'static str, form: &'static str) -> ListingEntry {
    ListingEntry {
        id,
        form,
        params: &[],
        needs_phi: true,
        range: "phi in Phi; phi(t) < t for all t > 0",
    }
}

const K: &[&str] = &["k"];
const KL: &[&str] = &["k", "L"];
const KAB: &[&str] = &["k", "a", "b"];
const A2: &[&str] = &["a1", "a2"];
const A3: &[&str] = &["a1", "a2", "a3"];
const A4: &[&str] = &["a1", "a2", "a3", "a4"];
const A5: &[&str] = &["a1", "a2", "a3", "a4", "a5"];

pub const CATALOG_LISTING: [ListingEntry; 16] = [
    entry("I", "r1 - k r2", K, "k in [0, 1)"),
    with_phi("II", "r1 - phi(r2)"),
    entry("III", "r1 - k (r3 + r4)", K, "k in [0, 1/2)"),
    entry("IV", "r1 - k (r5 + r6)", K, "k in [0, 1/2)"),
    entry(
        "V",
        "r1 - a1 r2 - a2 (r3 + r4) - a3 (r5 + r6)",
        A3,
        "a1, a2, a3 in [0, 1); a1 + 2 a2 + 2 a3 < 1",
    ),
    entry(
        "VI",
        "r1 - k r2 - L min{r3, r4, r5, r6}",
        KL,
        "k in [0, 1); L >= 0",
    ),
    entry(
        "VII",
        "r1 - k max{r2, r3, r4, (r5 + r6)/2} - L min{r3, r4, r5, r6}",
        KL,
        "k in [0, 1); L >= 0",
    ),
    entry("VIII", "r1 - k max{r2, r3, r4, r5, r6}", K, "k in [0, 1/2)"),
    entry(
        "IX",
        "r1 - (a1 r2 + a2 r3 + a3 r4 + a4 r5 + a5 r6)",
        A5,
        "a1, .., a5 > 0; a1 + .. + a5 < 1",
    ),
    entry("X", "r1 - k max{r2, r3, r4, r5/2, r6/2}", K, "k in [0, 1)"),
    entry(
        "XI",
        "r1 - k max{r2, r3, r4} - (1 - k)(a r5 + b r6)",
        KAB,
        "k in [0, 1); a, b in [0, 1/2)",
    ),
    entry(
        "XII",
        "r1^2 - r1 (a1 r2 + a2 r3 + a3 r4) - a4 r5 r6",
        A4,
        "a1 > 0; a2, a3, a4 >= 0; a1 + a2 + a3 < 1; a1 + a4 < 1",
    ),
    entry(
        "XIII",
        "r1 - k r2 (r5 + r6)/(r1 + r2), or r1 when r1 + r2 = 0",
        K,
        "k in [0, 1)",
    ),
    entry(
        "XIV",
        "r1^2 - a1 max{r2^2, r3^2, r4^2} - a2 max{r3 r5, r4 r6} - a3 r5 r6",
        A3,
        "a1, a2, a3 >= 0; a1 + 2 a2 < 1; a1 + a3 < 1",
    ),
    entry(
        "XV",
        "r1^3 - k (r2^3 + r3^3 + r4^3 + r5^3 + r6^3)",
        K,
        "k in [0, 1/11)",
    ),
    entry(
        "XVI",
        "r1 - a1 r2 r4/(r2 + r4) - a2 r3 r6/(r5 + r6 + 1), or r1 when r2 + r4 = 0",
        A2,
        "a1, a2 > 0; a1 < 2",
    ),
];

/// Explicit forms, written with `D = d(Tx,Ty)`, `M = d(gx,gy)`,
/// `P = d(gx,Tx)`, `Q = d(gy,Ty)`, `S = d(gx,Ty)`, `U = d(gy,Tx)`.
pub const COROLLARY3_LISTING: [ListingEntry; 20] = [
    entry("16", "D <= k M", K, "k in [0, 1)"),
    with_phi("17", "D <= phi(M)"),
    entry("18", "D <= k (P + Q)", K, "k in [0, 1/2)"),
    entry("19", "D <= k (S + U)", K, "k in [0, 1/2)"),
    entry(
        "20",
        "D <= k max{M, (P + Q)/2, (S + U)/2}",
        K,
        "k in [0, 1)",
    ),
    entry("21", "D <= k max{P, Q}", K, "k in [0, 1)"),
    entry(
        "22",
        "D <= a1 M + a2 (P + Q) + a3 (S + U)",
        A3,
        "a1, a2, a3 in [0, 1); a1 + 2 a2 + 2 a3 < 1",
    ),
    entry("23", "D <= k max{M, (P + Q)/2, S, U}", K, "k in [0, 1)"),
    entry(
        "24",
        "D <= k M + L min{P, Q, S, U}",
        KL,
        "k in [0, 1); L >= 0",
    ),
    entry(
        "25",
        "D <= a1 M + a2 P + a3 Q + a4 (S + U)",
        A4,
        "a1, .., a4 >= 0; a1 + a2 + a3 + 2 a4 < 1",
    ),
    entry(
        "26",
        "D <= k max{M, P, Q, (S + U)/2} + L min{P, Q, S, U}",
        KL,
        "k in [0, 1); L >= 0",
    ),
    entry("27", "D <= k max{M, P, Q, S, U}", K, "k in [0, 1/2)"),
    entry(
        "28",
        "D <= a1 M + a2 P + a3 Q + a4 S + a5 U",
        A5,
        "a1, .., a5 > 0; a1 + .. + a5 < 1",
    ),
    entry("29", "D <= k max{M, P, Q, S/2, U/2}", K, "k in [0, 1)"),
    entry(
        "30",
        "D <= k max{M, P, Q} + (1 - k)(a S + b U)",
        KAB,
        "k in [0, 1); a, b in [0, 1/2)",
    ),
    entry(
        "31",
        "D^2 <= D (a1 M + a2 P + a3 Q) + a4 S U",
        A4,
        "a1 > 0; a2, a3, a4 >= 0; a1 + a2 + a3 < 1; a1 + a4 < 1",
    ),
    entry(
        "32",
        "D <= k M (S + U)/(D + M), or D <= 0 when D + M = 0",
        K,
        "k in [0, 1)",
    ),
    entry(
        "33",
        "D^2 <= a1 max{M^2, P^2, Q^2} + a2 max{P S, Q U} + a3 S U",
        A3,
        "a1 > 0; a2, a3 >= 0; a1 + 2 a2 < 1; a1 + a3 < 1",
    ),
    entry(
        "34",
        "D^3 <= k (M^3 + P^3 + Q^3 + S^3 + U^3)",
        K,
        "k in [0, 1)",
    ),
    entry(
        "35",
        "D <= a1 M Q/(M + Q) + a2 P U/(S + U + 1), or D <= 0 when M + Q = 0",
        A2,
        "a1, a2 > 0; a1 < 2",
    ),
];
