#pragma once

#include "skewlab/catalog.hpp"
#include "skewlab/closure.hpp"
#include "skewlab/geometry.hpp"
#include "skewlab/group.hpp"
#include "skewlab/holonomy.hpp"
#include "skewlab/io.hpp"
#include "skewlab/linalg.hpp"
#include "skewlab/random.hpp"
#include "skewlab/structure.hpp"
#include "skewlab/three_form.hpp"
#include "skewlab/tolerances.hpp"
