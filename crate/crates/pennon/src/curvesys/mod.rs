//! Curve systems on (non-)orientable surfaces, represented as signed ribbon
//! graphs with realized marked curves.

pub mod ribbon;
pub mod system;

pub use ribbon::{
    CutPieces, Face, FaceId, HalfEdge, SignedRibbonGraph, SurfaceSignature, VertexId, Wall,
};
pub use system::{
    Crossing, CurveRecord, CurveSystem, MarkedCurve, MarkingToken, OverlayStep, OverlayWalk,
};
