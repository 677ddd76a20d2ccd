#pragma once

#include "spp/materials.hpp"
#include "spp/dispersion.hpp"
#include "spp/coupling.hpp"
#include "spp/geometry.hpp"
#include "spp/dynamics.hpp"
#include "spp/experiments.hpp"
#include "spp/config.hpp"
#include "spp/io.hpp"
