#pragma once

#include "equimesh/assembly.hpp"
#include "equimesh/error.hpp"
#include "equimesh/grid.hpp"
#include "equimesh/io.hpp"
#include "equimesh/monitor.hpp"
#include "equimesh/newton.hpp"
#include "equimesh/quality.hpp"
#include "equimesh/schwarz.hpp"
