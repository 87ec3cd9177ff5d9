#pragma once

#include "podns/assembly.hpp"
#include "podns/augment.hpp"
#include "podns/bench.hpp"
#include "podns/config.hpp"
#include "podns/counters.hpp"
#include "podns/fom.hpp"
#include "podns/linalg.hpp"
#include "podns/mesh.hpp"
#include "podns/pipeline.hpp"
#include "podns/pod.hpp"
#include "podns/problem.hpp"
#include "podns/quadrature.hpp"
#include "podns/rom.hpp"
#include "podns/space.hpp"
#include "podns/types.hpp"
#include "podns/vtk.hpp"
