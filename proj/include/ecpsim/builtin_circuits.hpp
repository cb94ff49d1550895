// Copyright 2026 The ecpsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Text of the shipped circuits/ecp1.ecp and circuits/ecp2.ecp, so the
// library can run them without touching the file system.

#ifndef ECPSIM_BUILTIN_CIRCUITS_HPP
#define ECPSIM_BUILTIN_CIRCUITS_HPP

#include <string_view>

namespace ecpsim::dsl {

inline constexpr std::string_view kBuiltinEcp1 = R"ecp(
circuit ecp1
param alpha_sq gamma_sq t1 t2
mode a1 b1 b2 b3 b4 b5 b6 b7 b8 b9 b10 d1 d2 d3 d4

section prepare
source a1 pol=H amp=sqrt(alpha_sq)*sqrt(gamma_sq) photon=signal
source a1 pol=V amp=sqrt(alpha_sq)*sqrt(1-gamma_sq) photon=signal
source b1 pol=H amp=sqrt(1-alpha_sq)*sqrt(gamma_sq) photon=signal
source b1 pol=V amp=sqrt(1-alpha_sq)*sqrt(1-gamma_sq) photon=signal
pbs in=b1 outH=b3 outV=b2

section round
source b4 pol=V
vbs in=b4 reflect=b5 transmit=b6 t=t1
source b7 pol=H
vbs in=b7 reflect=b8 transmit=b9 t=t2
bs in1=b2 in2=b5 out1=d1 out2=d2
bs in1=b3 in2=b8 out1=d3 out2=d4
detect group=D12 modes=d1,d2 require=exactly_one
detect group=D34 modes=d3,d4 require=exactly_one
flip mode=b6 when=d2
flip mode=b9 when=d4

section finish
pbs inH=b9 inV=b6 out=b10
output a1,b10
)ecp";

inline constexpr std::string_view kBuiltinEcp2 = R"ecp(
circuit ecp2
param alpha_sq gamma_sq t_plus t_minus
mode a1 b1 b2 b3 b4 b5 b6 b7 b8 b9 b10 d1 d2 d3 d4 d5 d6 d7 d8

section prepare
source a1 pol=H amp=sqrt(alpha_sq)*sqrt(gamma_sq) photon=signal
source a1 pol=V amp=sqrt(alpha_sq)*sqrt(1-gamma_sq) photon=signal
source b1 pol=H amp=sqrt(1-alpha_sq)*sqrt(gamma_sq) photon=signal
source b1 pol=V amp=sqrt(1-alpha_sq)*sqrt(1-gamma_sq) photon=signal
pbs in=b1 outH=b3 outV=b2

section round
source b4 pol=V
vbs in=b4 reflect=b5 transmit=b6 t=t_plus
source b7 pol=H
vbs in=b7 reflect=b8 transmit=b9 t=t_minus
qnd a=b2 b=b5 select=1
qnd a=b3 b=b8 select=1
bs in1=b2 in2=b5 out1=d1 out2=d2
bs in1=b3 in2=b8 out1=d5 out2=d6
detect group=D12 modes=d1,d2 require=exactly_one
detect group=D56 modes=d5,d6 require=exactly_one
flip mode=b6 when=d2
flip mode=b9 when=d6

section recycle
bs in1=b5 in2=b6 out1=d3 out2=d4
bs in1=b8 in2=b9 out1=d7 out2=d8
detect group=D34 modes=d3,d4 require=exactly_one
detect group=D78 modes=d7,d8 require=exactly_one
flip mode=b2 when=d4
flip mode=b3 when=d8

section finish
pbs inH=b9 inV=b6 out=b10
output a1,b10
)ecp";

}  // namespace ecpsim::dsl

#endif  // ECPSIM_BUILTIN_CIRCUITS_HPP
