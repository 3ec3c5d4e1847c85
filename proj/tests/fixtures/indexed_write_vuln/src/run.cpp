JNIEXPORT void JNICALL Java_Gate_nativeRun(JNIEnv *env, jclass cls, jbyteArray data) {
    jbyte *p = env->GetByteArrayElements(data, 0);
    int n = env->GetArrayLength(data);
    for (int i = 0; i < n; i++) {
        p[i] = 0;
    }
}
