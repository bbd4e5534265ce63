//! Thin data-parallel shims. With the `parallel` feature the maps run on
//! rayon's pool; without it they are plain sequential loops with the same
//! semantics, so results are bit-identical either way.

#[cfg(feature = "parallel")]
pub fn map_indexed<U: Send>(n: usize, f: impl Fn(usize) -> U + Sync + Send) -> Vec<U> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<U>(n: usize, f: impl Fn(usize) -> U) -> Vec<U> {
    (0..n).map(f).collect()
}

/// Always-sequential twin of `map_indexed`, kept available so the bench
/// suite can compare both paths in one build.
pub fn map_indexed_seq<U>(n: usize, f: impl Fn(usize) -> U) -> Vec<U> {
    (0..n).map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn join<A, B>(fa: impl FnOnce() -> A + Send, fb: impl FnOnce() -> B + Send) -> (A, B)
where
    A: Send,
    B: Send,
{
    rayon::join(fa, fb)
}

#[cfg(not(feature = "parallel"))]
pub fn join<A, B>(fa: impl FnOnce() -> A, fb: impl FnOnce() -> B) -> (A, B) {
    (fa(), fb())
}
