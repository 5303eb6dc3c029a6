int main() {
    int t;
    int i;
    float a[32];
    a[0] = 1.0;
    #pragma acc data copy(a)
    for (t = 0; t < 50; t++) {
        #pragma acc kernels
        for (i = 0; i < 32; i++) {
            a[i] = a[i] + 1.0;
        }
    }
    a[2] = a[0];
    return 0;
}
