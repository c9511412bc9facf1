#pragma once

#include "holonome/adiabatic.hpp"
#include "holonome/deformation.hpp"
#include "holonome/holonomy.hpp"
#include "holonome/matrix_kernel.hpp"
#include "holonome/report.hpp"
#include "holonome/spin_model.hpp"
#include "holonome/synthesis.hpp"
