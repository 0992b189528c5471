//! Named languages and monoids used by tests, the acceptance suite and the
//! command-line examples.

use crate::monoids::OrderedMonoid;

/// The ten reference languages over `{a,b,c}`, in order `L1` to `L10`.
pub const REFERENCE_LANGUAGES: [(&str, &str); 10] = [
    ("L1", "alphabet: abc; {a,b,c}* a b {a,b,c}^oo"),
    ("L2", "alphabet: abc; {a,b,c}* {b,c}^oo"),
    (
        "L3",
        "alphabet: abc; {a,b,c}* a b {a,b,c}^oo & !({a,b,c}* b a {a,b,c}^oo)",
    ),
    ("L4", "alphabet: abc; {a,b,c}* {b,c}^oo & ({a,b,c}* b)^w"),
    ("L5", "alphabet: abc; c* a {a,b,c}* b {a,b,c}^oo"),
    (
        "L6",
        "alphabet: abc; {a,b,c}* a {a,b,c}* b {a,b,c}^oo & ({b,c}* a {a,b}^oo | {b,c}^oo)",
    ),
    ("L7", "alphabet: abc; {a,b,c}* a {a,b,c}* b {a,b,c}^oo"),
    ("L8", "alphabet: abc; {b,c}* a {a,b}^oo | {b,c}^oo"),
    ("L9", "alphabet: abc; ({a,b,c}* b)^w"),
    ("L10", "alphabet: abc; !({a,b,c}* b a {a,b,c}^oo)"),
];

/// Language source text by reference name.
pub fn reference(name: &str) -> &'static str {
    REFERENCE_LANGUAGES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .expect("known reference language")
}

/// Twenty small languages with known degree bounds: whenever one is a
/// polynomial, a polynomial of degree at most three suffices.
pub const CURATED: [(&str, &str); 20] = [
    ("L1", "alphabet: abc; {a,b,c}* a b {a,b,c}^oo"),
    ("L2", "alphabet: abc; {a,b,c}* {b,c}^oo"),
    (
        "L3",
        "alphabet: abc; {a,b,c}* a b {a,b,c}^oo & !({a,b,c}* b a {a,b,c}^oo)",
    ),
    ("L4", "alphabet: abc; {a,b,c}* {b,c}^oo & ({a,b,c}* b)^w"),
    ("L5", "alphabet: abc; c* a {a,b,c}* b {a,b,c}^oo"),
    (
        "L6",
        "alphabet: abc; {a,b,c}* a {a,b,c}* b {a,b,c}^oo & ({b,c}* a {a,b}^oo | {b,c}^oo)",
    ),
    ("L7", "alphabet: abc; {a,b,c}* a {a,b,c}* b {a,b,c}^oo"),
    ("L8", "alphabet: abc; {b,c}* a {a,b}^oo | {b,c}^oo"),
    ("L9", "alphabet: abc; ({a,b,c}* b)^w"),
    ("L10", "alphabet: abc; !({a,b,c}* b a {a,b,c}^oo)"),
    ("finite", "alphabet: abc; {a,b,c}*"),
    ("infinite", "alphabet: abc; {a,b,c}^w"),
    ("im-ab", "alphabet: abc; IM{a,b}"),
    ("universe", "alphabet: abc; {a,b,c}^oo"),
    ("empty", "alphabet: abc; 0"),
    ("ab-infinitely", "alphabet: abc; ({a,b,c}* a b)^w"),
    ("a-star-ab-omega", "alphabet: ab; a* (a b)^w"),
    ("first-a", "alphabet: ab; b* a {a,b}^oo"),
    ("ends-in-a", "alphabet: ab; {a,b}* a"),
    ("c-a-b-c", "alphabet: abc; c* a {a,b,c}* b {a,b,c}* c"),
];

/// The monoid `{1, a, b, c, ba, 0}`: all elements but `ba` idempotent,
/// `0` a zero, `(ba)² = ab = 0` and `ca = a, ac = c, cb = c, bc = b`.
pub fn monoid_m() -> OrderedMonoid {
    let (one, a, b, c, ba, z) = (0, 1, 2, 3, 4, 5);
    let mut t = vec![vec![0; 6]; 6];
    let prod = [
        (a, a, a),
        (a, b, z),
        (a, c, c),
        (a, ba, z),
        (b, a, ba),
        (b, b, b),
        (b, c, b),
        (b, ba, ba),
        (c, a, a),
        (c, b, c),
        (c, c, c),
        (c, ba, a),
        (ba, a, ba),
        (ba, b, z),
        (ba, c, b),
        (ba, ba, z),
    ];
    for s in 0..6 {
        t[one][s] = s;
        t[s][one] = s;
        t[z][s] = z;
        t[s][z] = z;
    }
    for (x, y, r) in prod {
        t[x][y] = r;
    }
    OrderedMonoid::new(t, one)
        .expect("valid table")
        .with_generators(vec![('a', a), ('b', b), ('c', c)])
        .expect("generators in range")
        .with_names(["1", "a", "b", "c", "ba", "0"].map(String::from).to_vec())
}

/// The submonoid `M ∖ {c}`.
pub fn monoid_n() -> OrderedMonoid {
    let m = monoid_m();
    let keep = [0, 1, 2, 4, 5];
    let idx = |x: usize| {
        keep.iter()
            .position(|&k| k == x)
            .expect("closed under products")
    };
    let t: Vec<Vec<usize>> = keep
        .iter()
        .map(|&s| keep.iter().map(|&u| idx(m.mul(s, u))).collect())
        .collect();
    OrderedMonoid::new(t, 0)
        .expect("valid table")
        .with_generators(vec![('a', 1), ('b', 2)])
        .expect("generators in range")
        .with_names(["1", "a", "b", "ba", "0"].map(String::from).to_vec())
}
