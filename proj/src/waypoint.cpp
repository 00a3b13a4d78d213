#include "duonav/waypoint.hpp"

namespace duonav {

WaypointSequence normalize(const WaypointSequence& seq, const NormalizationBounds& b,
                           std::size_t* clamped) {
    b.validate();
    WaypointSequence out(seq.horizon());
    for (int i = 0; i < seq.horizon(); ++i)
        for (int d = 0; d < kWaypointDims; ++d)
            out[i].set_dim(d, b.to_unit(d, seq[i].dim(d), clamped));
    return out;
}

WaypointSequence denormalize(const WaypointSequence& seq, const NormalizationBounds& b) {
    b.validate();
    WaypointSequence out(seq.horizon());
    for (int i = 0; i < seq.horizon(); ++i)
        for (int d = 0; d < kWaypointDims; ++d)
            out[i].set_dim(d, b.from_unit(d, seq[i].dim(d)));
    return out;
}

}  // namespace duonav
