//! The two 15-slot x 10-RB example resource grids used by the sample
//! efficiency criterion. Each row string is one slot; the character at
//! position `rb` is the owning user id, '0' when unallocated.

fn parse(rows: &[&str]) -> Vec<Vec<u32>> {
    rows.iter()
        .map(|row| row.chars().map(|c| c.to_digit(10).unwrap()).collect())
        .collect()
}

/// Frequency-hopping allocation: user 1 holds 28 of the 150 RB-slots,
/// scattered over three different RB ranges.
pub fn scattered_grid() -> Vec<Vec<u32>> {
    parse(&[
        "2200110033",
        "2200110033",
        "2200010030",
        "2200110030",
        "0011332200",
        "0011332200",
        "0011332200",
        "0001332200",
        "3300002211",
        "3300002211",
        "3300002211",
        "3000002211",
        "3000002211",
        "3000002211",
        "3000002211",
    ])
}

/// The same traffic after pinning each user to a fixed sub-band: user 1
/// keeps its 28 RB-slots, now inside RBs {4, 5} throughout.
pub fn subband_aligned_grid() -> Vec<Vec<u32>> {
    parse(&[
        "2200110033",
        "2200110033",
        "2200010030",
        "2200110030",
        "2200110033",
        "2200110033",
        "2200110033",
        "2200010033",
        "2200110033",
        "2200110033",
        "2200110033",
        "2000110003",
        "2200110003",
        "2000110003",
        "2200110003",
    ])
}

pub fn cell_count(grid: &[Vec<u32>], user: u32) -> usize {
    grid.iter().flatten().filter(|&&o| o == user).count()
}
