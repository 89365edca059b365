#pragma once

#include "conleykit/conley.hpp"
#include "conleykit/critical.hpp"
#include "conleykit/field.hpp"
#include "conleykit/filtration.hpp"
#include "conleykit/flow.hpp"
#include "conleykit/homology.hpp"
#include "conleykit/mesh.hpp"
#include "conleykit/report.hpp"
#include "conleykit/surface.hpp"
#include "conleykit/thicken.hpp"
#include "conleykit/util.hpp"
