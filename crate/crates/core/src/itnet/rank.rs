/// Log-domain scores closer than this to the best score of their group count
/// as tied. Mathematically equal scores reached through different
/// floating-point paths differ by a few ulps, far below this bound.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// Orders `(token, score)` entries best first.
///
/// Entries are sorted by descending score and then grouped: an entry joins
/// the current group when it lies within [`TIE_TOLERANCE`] of the group's
/// first (highest) score. Each group is ordered by token, so among tied
/// entries the lexicographically smallest token wins.
pub fn rank_scores(mut entries: Vec<(String, f64)>) -> Vec<(String, f64)> {
    entries.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    let mut start = 0;
    while start < entries.len() {
        let lead = entries[start].1;
        let mut end = start + 1;
        while end < entries.len() {
            let s = entries[end].1;
            if s == lead || lead - s <= TIE_TOLERANCE {
                end += 1;
            } else {
                break;
            }
        }
        entries[start..end].sort_by(|a, b| a.0.cmp(&b.0));
        start = end;
    }
    entries
}
