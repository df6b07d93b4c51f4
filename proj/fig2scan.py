import mpmath as mp
from functools import lru_cache
from fractions import Fraction
import math
mp.mp.dps = 40
@lru_cache(maxsize=None)
def C(n,k):
    if k<0 or n<0 or k>n: return 0
    return math.comb(n,k)
def eq3_ber(N,L,W,lam):
    P = Fraction(W*W, 2*lam*L*C(W,lam))
    acc = mp.mpf(0)
    for i in range(W+1):
        s = Fraction(0)
        for j in range(1,lam+1):
            s += (-1)**j*C(i,j)*C(W-lam,lam-j)*P
        f = 1+s
        t = mp.mpf(C(W,i))*mp.power(mp.mpf(f.numerator)/f.denominator, N-1)
        acc = acc+t if i%2==0 else acc-t
    return max(mp.mpf(0),min(mp.mpf('0.5'),acc/2))
for lam,W,L in ((1,3,10000),(1,4,3000),(1,5,1500),(2,6,1500),(2,8,2000),(2,10,1200),(3,9,1500),(3,12,3000),(3,12,1500)):
    worst=0.0; pts=0; wN=None
    N=2
    while N<5000:
        e=eq3_ber(N,L,W,lam)
        if e>mp.mpf('1e-2'): break
        if e>=mp.mpf('1e-9'):
            a=0.5*(N*W/(2.0*L*lam))**(W/lam)
            d=abs(float(mp.log10(mp.mpf(a))-mp.log10(e)))
            pts+=1
            if d>worst: worst=d; wN=N
        N+=1
    print(f"lam={lam} W={W} L={L}: pts={pts} worst={worst:.3f} at N={wN}")
