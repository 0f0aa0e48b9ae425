//! Rasters of trees, tipsets and parameter scans, and the PPM/CSV writers.

mod draw;
mod grid;
mod scan;

pub use draw::{
    draw_segment, letter_color, render_tipset, render_tree, tipset_points, tree_segments, Segment,
    TreeStyle, BLACK, DEFAULT_DRAW_BUDGET, LETTER_COLORS, WHITE,
};
pub use grid::{write_cloud, write_image, Geometry, ImageGrid, Rgb};
pub use scan::{
    classify, scan_grid, LabelGrid, ScanConfig, ScanTests, LABEL_DISCONNECTED, LABEL_DOMAIN,
    LABEL_M0, LABEL_M2, PALETTE_DISCONNECTED, PALETTE_DOMAIN, PALETTE_M0, PALETTE_M2,
    PALETTE_NONE,
};
