public class Gate {
    native static void nativeRun(byte[] data);

    void entry(byte[] data) {
        nativeRun(data);
    }
}
