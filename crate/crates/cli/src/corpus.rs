//! Problems bundled with the binary, usable as `--input NAME`.

macro_rules! bundled {
    ($($name:literal),* $(,)?) => {
        /// `(name, JSON text)` of every bundled problem.
        pub const BUNDLED: &[(&str, &str)] = &[
            $(($name, include_str!(concat!("../problems/", $name, ".json")))),*
        ];
    };
}

bundled!(
    "gale_shapley_1962",
    "section2_jobmarket",
    "section4_jobmarket",
    "problem1",
    "problem2",
    "problem3",
    "problem4",
    "example_3_12",
    "example_6_1",
    "example_6_1b",
    "example_6_3a",
    "example_6_3b",
    "example_6_5",
    "hours_demo",
);

/// Text of a bundled problem; a trailing `.json` is ignored.
pub fn bundled(name: &str) -> Option<&'static str> {
    let name = name.strip_suffix(".json").unwrap_or(name);
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

pub fn names() -> impl Iterator<Item = &'static str> {
    BUNDLED.iter().map(|(n, _)| *n)
}
