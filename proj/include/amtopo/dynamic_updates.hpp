// Keeping an AM-model of K(I) current while voxels come and go.
//
// Single simplices are inserted with their boundary expressed in the current
// basis and a local Smith reduction; removals first concentrate the simplex
// in one basis chain, drop that chain, and re-reduce the few columns whose
// boundary changed. Set operations are sequences of voxel edits.

#ifndef AMTOPO_DYNAMIC_UPDATES_HPP
#define AMTOPO_DYNAMIC_UPDATES_HPP

#include <functional>
#include <vector>

#include "amtopo/am_model.hpp"
#include "amtopo/digital_image.hpp"

namespace amtopo {

/// Called after every single-simplex step with the model and the simplex.
using StepHook = std::function<void(const AmModel&, const Simplex&)>;

/// Inserts s; all faces of s must be present and s must be new.
void add_simplex(AmModel& m, const Simplex& s);
/// Removes s; s must be present and have no cofaces.
void delete_simplex(AmModel& m, const Simplex& s);

struct ImageModel
{
    DigitalImage image;
    AmModel model;
};

/// From scratch, using the special initial base.
ImageModel build_image_model(const DigitalImage& img);

/// The simplices an edit touches: ascending dimension for insertions,
/// descending for removals.
struct UpdatePlan
{
    Point voxel;
    bool insertion = true;
    std::vector<Simplex> simplices;
};

UpdatePlan plan_add(const DigitalImage& img, const Point& v);
UpdatePlan plan_delete(const DigitalImage& img, const Point& v);

void add_voxel(ImageModel& m, const Point& v, const StepHook& hook = {});
void delete_voxel(ImageModel& m, const Point& v, const StepHook& hook = {});

/// Removes F (when F is inside the image) or adds it (when disjoint from
/// it), one voxel at a time in lexicographic order.
void common_processing(ImageModel& m, const DigitalImage& F, const StepHook& hook = {});

/// Set operations. Degenerate inputs raise TrivialCaseError.
ImageModel union_model(const ImageModel& mI, const ImageModel& mJ, const StepHook& hook = {});
ImageModel intersection_model(const ImageModel& mI, const DigitalImage& J, const StepHook& hook = {});
ImageModel difference_model(const ImageModel& mI, const DigitalImage& J, const StepHook& hook = {});
/// mG must be a model of the frame G_I (see inverse_frame).
ImageModel inverse_model(const ImageModel& mG, const DigitalImage& I, const StepHook& hook = {});
ImageModel inverse_model(const DigitalImage& I, const StepHook& hook = {});

}  // namespace amtopo

#endif
