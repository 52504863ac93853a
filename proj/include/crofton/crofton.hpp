#pragma once

#include "crofton/catalog.hpp"
#include "crofton/cloud_io.hpp"
#include "crofton/error.hpp"
#include "crofton/estimators.hpp"
#include "crofton/expression.hpp"
#include "crofton/geometry.hpp"
#include "crofton/interval_search.hpp"
#include "crofton/mesh_intersect.hpp"
#include "crofton/mesh_io.hpp"
#include "crofton/normals.hpp"
#include "crofton/rng.hpp"
#include "crofton/samplers.hpp"
#include "crofton/stats.hpp"
#include "crofton/surfaces.hpp"
#include "crofton/validate.hpp"
#include "crofton/vec.hpp"
