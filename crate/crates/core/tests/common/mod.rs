#![allow(dead_code, clippy::excessive_precision)]

/// Roots of the edge conditions computed independently at 40 digits,
/// as `(a, b, α₁, β₁)`.
pub const REFERENCE_ROOTS: [(u32, u32, f64, f64); 27] = [
    (2, 3, 1.2039358384794982, 0.59697087326137855),
    (2, 4, 1.3323370066493726, 0.36185112938808414),
    (2, 5, 1.422240287723615, 0.21820676702964392),
    (2, 6, 1.4864924318398326, 0.12158053411067257),
    (2, 7, 1.5341751696434009, 0.052204126481581898),
    (3, 4, 0.81000830131483024, 0.42710058965284188),
    (3, 5, 0.8954526121011978, 0.26010016983795577),
    (3, 6, 0.95883688699424678, 0.14733259866532834),
    (3, 7, 1.0068184520374425, 0.066170482834472692),
    (3, 8, 1.0441197749520055, 0.0049845045492394814),
    (4, 5, 0.60264965425704924, 0.34514046594719983),
    (4, 6, 0.66299364710689276, 0.22397517833672116),
    (4, 7, 0.70933482326897966, 0.13648424730585605),
    (4, 8, 0.74565961272528162, 0.070377390084451465),
    (4, 9, 0.77475468227384079, 0.018675525430970261),
    (5, 6, 0.47640281319396503, 0.29370699438072284),
    (5, 7, 0.52103140908540246, 0.20318007618595294),
    (5, 8, 0.55620478639292553, 0.13471757310199259),
    (5, 9, 0.58446665551710571, 0.081142236345901115),
    (5, 10, 0.60759636088943712, 0.03807682761012046),
    (5, 11, 0.62683884218895991, 0.0027045747155958199),
    (6, 7, 0.39235825176680184, 0.25690754654710747),
    (6, 8, 0.42661911367917069, 0.18719435276148016),
    (6, 9, 0.45421115385712008, 0.13263764784168422),
    (6, 10, 0.47682320202754721, 0.088784973196542355),
    (6, 11, 0.49565037017242336, 0.052768730647047472),
    (6, 12, 0.51154767061855786, 0.022660506784174425),
];

/// Published table of solutions `(a, b, α₁, β₁)`, to the printed digits.
pub const PUBLISHED_TABLE: [(u32, u32, f64, f64); 27] = [
    (2, 3, 1.20394, 0.5969756),
    (2, 4, 1.332343, 0.3618578),
    (2, 5, 1.422264, 0.218217),
    (2, 6, 1.486543, 0.1215925),
    (2, 7, 1.534341, 5.222918E-02),
    (3, 4, 0.810013, 0.4270995),
    (3, 5, 0.8954629, 0.2600982),
    (3, 6, 0.9588664, 0.1473277),
    (3, 7, 1.006904, 6.615758E-02),
    (3, 8, 1.047133, 4.563809E-03),
    (4, 5, 0.6026575, 0.3451357),
    (4, 6, 0.6630102, 0.2239677),
    (4, 7, 0.7093756, 0.1364688),
    (4, 8, 0.7457473, 7.034869E-02),
    (4, 9, 0.775143, 1.856247E-02),
    (5, 6, 0.4764179, 0.293696),
    (5, 7, 0.5210571, 0.2031649),
    (5, 8, 0.5562545, 0.1346927),
    (5, 9, 0.5845534, 8.110417E-02),
    (5, 10, 0.6078031, 3.799561E-02),
    (5, 11, 0.6283055, 2.171273E-03),
    (6, 7, 0.3923899, 0.2568823),
    (6, 8, 0.4266642, 0.1871642),
    (6, 9, 0.454274, 0.1326011),
    (6, 10, 0.4769213, 8.873422E-02),
    (6, 11, 0.4958152, 5.269175E-02),
    (6, 12, 0.5119572, 2.248575E-02),
];

/// Largest admissible `b` for `a = 2..=12`.
pub const BMAX: [(u32, u32); 11] = [
    (2, 7),
    (3, 8),
    (4, 9),
    (5, 11),
    (6, 12),
    (7, 14),
    (8, 16),
    (9, 18),
    (10, 20),
    (11, 22),
    (12, 24),
];
