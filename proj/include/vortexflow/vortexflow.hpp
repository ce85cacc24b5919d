#ifndef VORTEXFLOW_VORTEXFLOW_HPP
#define VORTEXFLOW_VORTEXFLOW_HPP

#include "vortexflow/disk_spectral.hpp"
#include "vortexflow/dynamics.hpp"
#include "vortexflow/errors.hpp"
#include "vortexflow/geometry.hpp"
#include "vortexflow/profile.hpp"
#include "vortexflow/reconstruct.hpp"
#include "vortexflow/renorm.hpp"
#include "vortexflow/specialfn.hpp"

#endif
