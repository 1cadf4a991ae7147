#pragma once

#include "angcp/circular.hpp"
#include "angcp/cusum.hpp"
#include "angcp/geometry.hpp"
#include "angcp/io.hpp"
#include "angcp/kolmogorov.hpp"
#include "angcp/samplers.hpp"
#include "angcp/segmentation.hpp"
#include "angcp/simulation.hpp"
#include "angcp/surface.hpp"
